import numpy as np

NORM_EPS = 1e-8
NORM_CLIP = 10.0


#-------------------------------------------------------------------------

class RunningMoments:

    """ Running mean/variance with batched (Chan et al.) updates.
        Population variance m2 / count; zero before the first update. """

    def __init__(self, shape: tuple[int, ...] = (), clip: float = NORM_CLIP):
        self.shape = tuple(shape)
        self.clip = clip
        self.count = 0
        self.mean = np.zeros(self.shape)
        self.m2 = np.zeros(self.shape)

    @property
    def var(self) -> np.ndarray:
        if self.count == 0:
            return np.zeros(self.shape)

        return self.m2 / self.count

    def update(self, x: np.ndarray) -> None:
        """ x has shape (batch,) + shape """

        x = np.asarray(x, dtype=np.float64).reshape((-1,) + self.shape)
        batch_count = x.shape[0]
        batch_mean = x.mean(axis=0)
        batch_m2 = ((x - batch_mean) ** 2).sum(axis=0)

        total = self.count + batch_count
        delta = batch_mean - self.mean

        self.mean = self.mean + delta * batch_count / total
        self.m2 = self.m2 + batch_m2 + delta ** 2 * self.count * batch_count / total
        self.count = total

    def state_dict(self) -> dict[str, np.ndarray]:
        return {"count": np.array(float(self.count)), "mean": self.mean.copy(), "m2": self.m2.copy()}

    def load_state_dict(self, state: dict[str, np.ndarray]) -> None:
        self.count = int(state["count"])
        self.mean = np.asarray(state["mean"], dtype=np.float64).copy()
        self.m2 = np.asarray(state["m2"], dtype=np.float64).copy()


def normalize_obs(moments: RunningMoments, observation: np.ndarray, update: bool = True) -> np.ndarray:
    """ (x - mean) / sqrt(var + 1e-8), clipped; stats move only when update is set """

    if update:
        moments.update(observation)

    normed = (observation - moments.mean) / np.sqrt(moments.var + NORM_EPS)

    return np.clip(normed, -moments.clip, moments.clip)


#-------------------------------------------------------------------------

class RewardScaler:

    """ Divides rewards by the running std of a per-env discounted
        return accumulator and clips; identity when disabled """

    def __init__(self, num_envs: int, gamma: float, enabled: bool = True, clip: float = NORM_CLIP):
        self.gamma = gamma
        self.enabled = enabled
        self.moments = RunningMoments((), clip)
        self.returns = np.zeros(num_envs)

    def __call__(self, reward: np.ndarray, done: np.ndarray) -> np.ndarray:
        return scale_reward(self, reward, done)


def scale_reward(scaler: RewardScaler, reward: np.ndarray, done: np.ndarray) -> np.ndarray:
    reward = np.asarray(reward, dtype=np.float64)

    if not scaler.enabled:
        return reward

    done = np.asarray(done, dtype=np.float64)
    scaler.returns = scaler.returns * scaler.gamma * (1.0 - done) + reward
    scaler.moments.update(scaler.returns)
    scaled = reward / np.sqrt(scaler.moments.var + NORM_EPS)

    return np.clip(scaled, -scaler.moments.clip, scaler.moments.clip)
