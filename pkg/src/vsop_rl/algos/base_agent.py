from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass

import numpy as np

from vsop_rl.config import TrainConfig
from vsop_rl.envs.base_env import EnvSpec
from vsop_rl.exceptions import CheckpointError, StaleBufferError
from vsop_rl.networks.distributions import Categorical, DiagGaussian
from vsop_rl.networks.mlp import DropoutMask, Mlp, backward, forward, sample_dropout_mask
from vsop_rl.rollout.buffer import RolloutBuffer
from vsop_rl.rollout.gae import AdvantageSet, compute_gae, explained_variance
from vsop_rl.utils.losses import value_loss
from vsop_rl.utils.optimisers import (
    OptimizerState,
    beta_from_dropout,
    clip_by_global_norm,
    global_norm,
    step
)

ACTOR_OUT_GAIN = 0.01
CRITIC_OUT_GAIN = 1.0


#-------------------------------------------------------------------------

@dataclass
class UpdateReport:

    """ Means over all minibatches of one update """

    actor_loss: float = 0.0
    critic_loss: float = 0.0
    entropy: float = 0.0
    clip_fraction: float = 0.0
    actor_grad_norm: float = 0.0
    critic_grad_norm: float = 0.0
    pg_grad_norm: float = 0.0
    approx_kl: float = 0.0
    explained_variance: float = float("nan")
    reduction: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class PolicyTerm:

    """ Policy-gradient part of a minibatch update.
        output_grad is d(loss)/d(actor output), log_std_grad the
        matching Gaussian scale gradient (None for discrete). """

    output_grad: np.ndarray
    log_std_grad: np.ndarray | None
    actor_loss: float
    clip_fraction: float


#-------------------------------------------------------------------------

class BaseAgent(ABC):

    """ Actor-critic bundle and the shared update template.
        Subclasses supply the policy-gradient term for a minibatch. """

    name = "base"

    def __init__(self, spec: EnvSpec, config: TrainConfig, rng: np.random.Generator):
        self.spec = spec
        self.config = config
        self.rng = rng
        self.discrete = spec.action_space.discrete

        hidden = [config.width] * config.depth
        self.actor = Mlp.build(
            spec.obs_dim, hidden, spec.action_space.dim, config.activation, rng,
            config.dropout, config.spectral_actor, ACTOR_OUT_GAIN
        )
        self.critic = Mlp.build(
            spec.obs_dim, hidden, 1, config.activation, rng,
            config.dropout, config.spectral_critic, CRITIC_OUT_GAIN
        )
        self.log_std = None if self.discrete else np.zeros(spec.action_space.dim)

        self.actor_opt = OptimizerState(config.optimizer, config.optim_eps)
        self.critic_opt = OptimizerState(config.optimizer, config.optim_eps)
        self.version = 0
        self.frozen_critic = None

    #-------------------------------------------------------------------------
    """ Acting """

    def distribution(self, output: np.ndarray) -> Categorical | DiagGaussian:
        if self.discrete:
            return Categorical(output)

        return DiagGaussian(output, self.log_std)

    def act(
        self,
        obs: np.ndarray,
        thompson: bool = False
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:

        """ Sample actions for a (N, d) batch of normalised observations.
            With Thompson sampling each row acts under its own dropout
            draw of the actor. Returns actions, log-probs and values. """

        mask = sample_dropout_mask(self.actor, self.rng, obs.shape[0]) if thompson else None
        output, _ = forward(self.actor, obs, mask)
        dist = self.distribution(output)
        actions = dist.sample(self.rng)

        return actions, dist.log_prob(actions), self.value(obs)

    def mode_action(self, obs: np.ndarray) -> np.ndarray:
        output, _ = forward(self.actor, obs)

        return self.distribution(output).mode()

    def value(self, obs: np.ndarray, mask: DropoutMask | None = None, critic: Mlp | None = None) -> np.ndarray:
        output, _ = forward(self.critic if critic is None else critic, obs, mask)

        return output[..., 0]

    #-------------------------------------------------------------------------
    """ Advantage estimation """

    def critic_values(
        self,
        critic: Mlp,
        buffer: RolloutBuffer,
        mask: DropoutMask | None = None
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:

        """ Values, last values and truncation bootstrap values of a
            buffer under the given critic and dropout draw """

        T, N = buffer.num_steps, buffer.num_envs
        values = self.value(buffer.flat(buffer.obs), mask, critic).reshape(T, N)
        last_values = self.value(buffer.last_obs, mask, critic)

        bootstrap_values = np.full((T, N), np.nan)
        needs = buffer.truncated & ~buffer.terminated

        if np.any(needs):
            bootstrap_values[needs] = self.value(buffer.bootstrap_obs[needs], mask, critic)

        return values, last_values, bootstrap_values

    def advantages(
        self,
        critic: Mlp,
        buffer: RolloutBuffer,
        mask: DropoutMask | None = None
    ) -> AdvantageSet:

        values, last_values, bootstrap_values = self.critic_values(critic, buffer, mask)

        return compute_gae(
            buffer, self.config.gamma, self.config.gae_lambda,
            values, last_values, bootstrap_values
        )

    #-------------------------------------------------------------------------
    """ Gradient steps """

    def score_function_term(
        self,
        dist: Categorical | DiagGaussian,
        actions: np.ndarray,
        coef: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray | None]:

        """ Gradient of -mean(coef * log pi(a|s)) w.r.t. the actor output """

        B = coef.shape[0]

        if self.discrete:
            return -coef[:, None] * dist.log_prob_grad(actions) / B, None

        g_mean, g_log_std = dist.log_prob_grad(actions)

        return -coef[:, None] * g_mean / B, -np.sum(coef[:, None] * g_log_std, axis=0) / B

    def entropy_term(self, dist: Categorical | DiagGaussian) -> tuple[np.ndarray, np.ndarray | None]:
        """ Gradient of -ent_coef * mean(entropy) w.r.t. the actor output """

        ent_coef = self.config.ent_coef

        if self.discrete:
            B = dist.logits.shape[0]
            return -ent_coef * dist.entropy_grad() / B, None

        g_mean, g_log_std = dist.entropy_grad()

        return -ent_coef * g_mean / g_mean.shape[0], -ent_coef * g_log_std.mean(axis=0)

    def actor_parameters(self) -> dict[str, np.ndarray]:
        params = self.actor.parameters()

        if not self.discrete:
            params["log_std"] = self.log_std.copy()

        return params

    def apply_actor_grads(self, grads: dict[str, np.ndarray], lr: float, decay: float) -> float:
        grads, norm = clip_by_global_norm(grads, self.config.max_grad_norm)
        params = step(self.actor_opt, self.actor_parameters(), grads, lr, decay, no_decay=("log_std",))

        if not self.discrete:
            self.log_std = params.pop("log_std")

        self.actor.set_parameters(params)
        self.actor.update_spectral(self.config.power_iterations)

        return norm

    def fit_critic(
        self,
        obs: np.ndarray,
        targets: np.ndarray,
        old_values: np.ndarray,
        lr: float,
        decay: float
    ) -> tuple[float, float]:

        """ One regression step of the critic under a fresh dropout draw """

        cfg = self.config
        mask = sample_dropout_mask(self.critic, self.rng)
        output, cache = forward(self.critic, obs, mask)

        clip_eps = cfg.clip_coef if cfg.clip_vloss else None
        loss, grad = value_loss(output[:, 0], targets, old_values, clip_eps)
        grads, _ = backward(self.critic, cache, cfg.vf_coef * grad[:, None])

        grads, norm = clip_by_global_norm(grads, cfg.max_grad_norm)
        params = step(self.critic_opt, self.critic.parameters(), grads, lr, decay)
        self.critic.set_parameters(params)
        self.critic.update_spectral(cfg.power_iterations)

        return loss, norm

    #-------------------------------------------------------------------------
    """ Update template """

    @abstractmethod
    def policy_term(
        self,
        dist: Categorical | DiagGaussian,
        actions: np.ndarray,
        h: np.ndarray,
        ratio: np.ndarray,
        obs: np.ndarray,
        raw_obs: np.ndarray
    ) -> PolicyTerm:
        pass

    def fit_auxiliary(self, obs: np.ndarray, actions: np.ndarray, targets: np.ndarray, lr: float, decay: float) -> None:
        pass

    def decay_coeff(self, buffer: RolloutBuffer) -> float:
        if self.config.derive_weight_decay:
            return beta_from_dropout(self.config.dropout, buffer.size)

        return self.config.weight_decay

    def check_buffer(self, buffer: RolloutBuffer) -> None:
        buffer.check_filled()

        if buffer.version != self.version:
            raise StaleBufferError(
                f"Buffer collected under policy version {buffer.version}, agent is at {self.version}"
            )

    def update(self, buffer: RolloutBuffer, lr: float) -> UpdateReport:
        self.check_buffer(buffer)
        cfg = self.config

        # Critic snapshot for advantage estimates
        frozen = self.critic.copy()
        self.frozen_critic = frozen
        decay = self.decay_coeff(buffer)
        fixed = self.advantages(frozen, buffer)

        obs = buffer.flat(buffer.obs)
        raw_obs = buffer.flat(buffer.raw_obs)
        actions = buffer.flat(buffer.actions)
        old_log_probs = buffer.flat(buffer.log_probs)

        sums = {k: 0.0 for k in UpdateReport().to_dict() if k not in ("explained_variance", "reduction")}
        count = 0

        for _ in range(cfg.update_epochs):
            for mb in buffer.minibatch_indices(cfg.num_minibatches, self.rng):
                if cfg.thompson_sampling:
                    adv = self.advantages(frozen, buffer, sample_dropout_mask(frozen, self.rng))
                else:
                    adv = fixed

                h = buffer.flat(adv.advantages)[mb]
                targets = buffer.flat(adv.returns)[mb]
                old_values = buffer.flat(adv.values)[mb]

                actor_mask = sample_dropout_mask(self.actor, self.rng)
                output, cache = forward(self.actor, obs[mb], actor_mask)
                dist = self.distribution(output)
                log_ratio = dist.log_prob(actions[mb]) - old_log_probs[mb]
                ratio = np.exp(log_ratio)

                term = self.policy_term(dist, actions[mb], h, ratio, obs[mb], raw_obs[mb])
                ent_out, ent_log_std = self.entropy_term(dist)

                pg_grads, _ = backward(self.actor, cache, term.output_grad)
                ent_grads, _ = backward(self.actor, cache, ent_out)

                if not self.discrete:
                    pg_grads["log_std"] = term.log_std_grad
                    ent_grads["log_std"] = ent_log_std

                grads = {k: pg_grads[k] + ent_grads[k] for k in pg_grads}

                sums["pg_grad_norm"] += global_norm(pg_grads)
                sums["actor_grad_norm"] += self.apply_actor_grads(grads, lr, decay)

                critic_loss, critic_norm = self.fit_critic(obs[mb], targets, old_values, lr, decay)
                self.fit_auxiliary(obs[mb], actions[mb], targets, lr, decay)

                sums["actor_loss"] += term.actor_loss
                sums["critic_loss"] += critic_loss
                sums["critic_grad_norm"] += critic_norm
                sums["entropy"] += float(np.mean(dist.entropy()))
                sums["clip_fraction"] += term.clip_fraction
                sums["approx_kl"] += float(np.mean((ratio - 1.0) - log_ratio))
                count += 1

        self.version += 1
        report = UpdateReport(**{k: v / count for k, v in sums.items()})
        report.explained_variance = explained_variance(fixed.values.ravel(), fixed.returns.ravel())

        return report

    #-------------------------------------------------------------------------
    """ Parameter snapshots """

    def state_dict(self) -> dict[str, np.ndarray]:
        state = {f"actor.{k}": v for k, v in self.actor.parameters().items()}
        state.update({f"actor.{k}": v for k, v in self.actor.spectral_state().items()})
        state.update({f"critic.{k}": v for k, v in self.critic.parameters().items()})
        state.update({f"critic.{k}": v for k, v in self.critic.spectral_state().items()})

        if not self.discrete:
            state["actor.log_std"] = self.log_std.copy()

        return state

    def load_state_dict(self, state: dict[str, np.ndarray]) -> None:
        try:
            for prefix, net in (("actor.", self.actor), ("critic.", self.critic)):
                sub = {k[len(prefix):]: v for k, v in state.items() if k.startswith(prefix)}
                net.set_parameters(sub)
                net.set_spectral_state(sub)
        except KeyError as e:
            raise CheckpointError(f"Checkpoint is missing parameter {e}") from e

        if not self.discrete:
            if "actor.log_std" not in state:
                raise CheckpointError("Checkpoint is missing actor.log_std")
            self.log_std = np.asarray(state["actor.log_std"], dtype=np.float64).copy()
