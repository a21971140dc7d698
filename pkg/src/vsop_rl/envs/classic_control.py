import numpy as np

from vsop_rl.envs import constants as c
from vsop_rl.envs.base_env import ActionSpace, BaseEnv, EnvSpec


#-------------------------------------------------------------------------
""" Cart-pole balancing, Euler integration, +1 per step """

class CartPole(BaseEnv):

    spec = EnvSpec("CartPole-v1", 4, ActionSpace(n=2), c.CARTPOLE_MAX_STEPS)

    def __init__(self):
        super().__init__()
        self.state = np.zeros(4)

    def _reset_state(self, rng: np.random.Generator) -> None:
        self.state = rng.uniform(-c.CARTPOLE_RESET_BOUND, c.CARTPOLE_RESET_BOUND, size=4)

    def _transition(self, action: int) -> tuple[float, bool]:
        x, x_dot, theta, theta_dot = self.state
        force = c.CARTPOLE_FORCE_MAG if action == 1 else -c.CARTPOLE_FORCE_MAG
        costheta, sintheta = np.cos(theta), np.sin(theta)

        temp = (force + c.CARTPOLE_POLEMASS_LENGTH * theta_dot ** 2 * sintheta) / c.CARTPOLE_TOTAL_MASS
        thetaacc = (c.CARTPOLE_GRAVITY * sintheta - costheta * temp) / (
            c.CARTPOLE_LENGTH * (4.0 / 3.0 - c.CARTPOLE_MASSPOLE * costheta ** 2 / c.CARTPOLE_TOTAL_MASS)
        )
        xacc = temp - c.CARTPOLE_POLEMASS_LENGTH * thetaacc * costheta / c.CARTPOLE_TOTAL_MASS

        x = x + c.CARTPOLE_TAU * x_dot
        x_dot = x_dot + c.CARTPOLE_TAU * xacc
        theta = theta + c.CARTPOLE_TAU * theta_dot
        theta_dot = theta_dot + c.CARTPOLE_TAU * thetaacc
        self.state = np.array([x, x_dot, theta, theta_dot])

        terminated = bool(
            x < -c.CARTPOLE_X_THRESHOLD
            or x > c.CARTPOLE_X_THRESHOLD
            or theta < -c.CARTPOLE_THETA_THRESHOLD
            or theta > c.CARTPOLE_THETA_THRESHOLD
        )

        return 1.0, terminated

    def _observe(self) -> np.ndarray:
        return self.state.copy()


#-------------------------------------------------------------------------

def angle_normalize(x: float) -> float:
    return ((x + np.pi) % (2 * np.pi)) - np.pi


class Pendulum(BaseEnv):

    """ Torque-limited swing-up, reward -(theta^2 + 0.1 thetadot^2 + 0.001 u^2) """

    spec = EnvSpec(
        "Pendulum-v1", 3,
        ActionSpace(low=(-c.PENDULUM_MAX_TORQUE,), high=(c.PENDULUM_MAX_TORQUE,)),
        c.PENDULUM_MAX_STEPS
    )

    def __init__(self):
        super().__init__()
        self.state = np.zeros(2)

    def _reset_state(self, rng: np.random.Generator) -> None:
        high = np.array([c.PENDULUM_RESET_THETA, c.PENDULUM_RESET_THETADOT])
        self.state = rng.uniform(-high, high)

    def _transition(self, action: np.ndarray) -> tuple[float, bool]:
        th, thdot = self.state
        u = float(action[0])
        g, m, l, dt = c.PENDULUM_G, c.PENDULUM_M, c.PENDULUM_L, c.PENDULUM_DT

        costs = angle_normalize(th) ** 2 + 0.1 * thdot ** 2 + 0.001 * u ** 2

        newthdot = thdot + (3 * g / (2 * l) * np.sin(th) + 3.0 / (m * l ** 2) * u) * dt
        newthdot = np.clip(newthdot, -c.PENDULUM_MAX_SPEED, c.PENDULUM_MAX_SPEED)
        newth = th + newthdot * dt
        self.state = np.array([newth, newthdot])

        return -costs, False

    def _observe(self) -> np.ndarray:
        th, thdot = self.state

        return np.array([np.cos(th), np.sin(th), thdot])


#-------------------------------------------------------------------------

class MountainCarContinuous(BaseEnv):

    spec = EnvSpec(
        "MountainCarContinuous-v0", 2,
        ActionSpace(low=(c.MOUNTAINCAR_MIN_ACTION,), high=(c.MOUNTAINCAR_MAX_ACTION,)),
        c.MOUNTAINCAR_MAX_STEPS
    )

    def __init__(self):
        super().__init__()
        self.state = np.zeros(2)

    def _reset_state(self, rng: np.random.Generator) -> None:
        self.state = np.array([rng.uniform(c.MOUNTAINCAR_RESET_LOW, c.MOUNTAINCAR_RESET_HIGH), 0.0])

    def _transition(self, action: np.ndarray) -> tuple[float, bool]:
        position, velocity = self.state
        force = float(action[0])

        velocity += force * c.MOUNTAINCAR_POWER - c.MOUNTAINCAR_GRAVITY_TERM * np.cos(3 * position)
        velocity = np.clip(velocity, -c.MOUNTAINCAR_MAX_SPEED, c.MOUNTAINCAR_MAX_SPEED)
        position += velocity
        position = np.clip(position, c.MOUNTAINCAR_MIN_POSITION, c.MOUNTAINCAR_MAX_POSITION)

        if position == c.MOUNTAINCAR_MIN_POSITION and velocity < 0:
            velocity = 0.0

        terminated = bool(
            position >= c.MOUNTAINCAR_GOAL_POSITION and velocity >= c.MOUNTAINCAR_GOAL_VELOCITY
        )
        reward = c.MOUNTAINCAR_GOAL_REWARD if terminated else 0.0
        reward -= c.MOUNTAINCAR_ACTION_COST * force ** 2
        self.state = np.array([position, velocity])

        return reward, terminated

    def _observe(self) -> np.ndarray:
        return self.state.copy()


#-------------------------------------------------------------------------

def wrap(x: float, m: float, M: float) -> float:
    diff = M - m

    while x > M:
        x = x - diff
    while x < m:
        x = x + diff

    return x


def rk4(derivs, y0: np.ndarray, dt: float) -> np.ndarray:
    """ Single classical Runge-Kutta step over [0, dt] """

    k1 = np.asarray(derivs(y0))
    k2 = np.asarray(derivs(y0 + dt / 2.0 * k1))
    k3 = np.asarray(derivs(y0 + dt / 2.0 * k2))
    k4 = np.asarray(derivs(y0 + dt * k3))

    return y0 + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


class Acrobot(BaseEnv):

    """ Two-link swing-up with the "book" dynamics, -1 per step
        until the tip clears the bar """

    spec = EnvSpec("Acrobot-v1", 6, ActionSpace(n=3), c.ACROBOT_MAX_STEPS)

    def __init__(self):
        super().__init__()
        self.state = np.zeros(4)

    def _reset_state(self, rng: np.random.Generator) -> None:
        self.state = rng.uniform(-c.ACROBOT_RESET_BOUND, c.ACROBOT_RESET_BOUND, size=4)

    def _dsdt(self, s_augmented: np.ndarray) -> tuple[float, ...]:
        m1, m2 = c.ACROBOT_LINK_MASS_1, c.ACROBOT_LINK_MASS_2
        l1 = c.ACROBOT_LINK_LENGTH_1
        lc1, lc2 = c.ACROBOT_LINK_COM_POS_1, c.ACROBOT_LINK_COM_POS_2
        I1 = I2 = c.ACROBOT_LINK_MOI
        g = c.ACROBOT_GRAVITY

        a = s_augmented[-1]
        theta1, theta2, dtheta1, dtheta2 = s_augmented[:-1]

        d1 = m1 * lc1 ** 2 + m2 * (l1 ** 2 + lc2 ** 2 + 2 * l1 * lc2 * np.cos(theta2)) + I1 + I2
        d2 = m2 * (lc2 ** 2 + l1 * lc2 * np.cos(theta2)) + I2
        phi2 = m2 * lc2 * g * np.cos(theta1 + theta2 - np.pi / 2.0)
        phi1 = (
            -m2 * l1 * lc2 * dtheta2 ** 2 * np.sin(theta2)
            - 2 * m2 * l1 * lc2 * dtheta2 * dtheta1 * np.sin(theta2)
            + (m1 * lc1 + m2 * l1) * g * np.cos(theta1 - np.pi / 2)
            + phi2
        )
        ddtheta2 = (
            a + d2 / d1 * phi1 - m2 * l1 * lc2 * dtheta1 ** 2 * np.sin(theta2) - phi2
        ) / (m2 * lc2 ** 2 + I2 - d2 ** 2 / d1)
        ddtheta1 = -(d2 * ddtheta2 + phi1) / d1

        return (dtheta1, dtheta2, ddtheta1, ddtheta2, 0.0)

    def _terminal(self) -> bool:
        s = self.state

        return bool(-np.cos(s[0]) - np.cos(s[1] + s[0]) > 1.0)

    def _transition(self, action: int) -> tuple[float, bool]:
        torque = c.ACROBOT_AVAIL_TORQUE[action]
        s_augmented = np.append(self.state, torque)

        ns = rk4(self._dsdt, s_augmented, c.ACROBOT_DT)[:4]
        ns[0] = wrap(ns[0], -np.pi, np.pi)
        ns[1] = wrap(ns[1], -np.pi, np.pi)
        ns[2] = np.clip(ns[2], -c.ACROBOT_MAX_VEL_1, c.ACROBOT_MAX_VEL_1)
        ns[3] = np.clip(ns[3], -c.ACROBOT_MAX_VEL_2, c.ACROBOT_MAX_VEL_2)
        self.state = ns

        terminated = self._terminal()

        return (0.0 if terminated else -1.0), terminated

    def _observe(self) -> np.ndarray:
        s = self.state

        return np.array([np.cos(s[0]), np.sin(s[0]), np.cos(s[1]), np.sin(s[1]), s[2], s[3]])
