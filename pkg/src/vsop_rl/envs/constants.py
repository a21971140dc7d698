""" Physical constants and limits for the classic-control tasks.
    All values follow the Gym/Gymnasium classic_control sources
    (cartpole.py, pendulum.py, continuous_mountain_car.py, acrobot.py)
    and the TimeLimit registrations in gymnasium/envs/__init__.py. """

import numpy as np

#-------------------------------------------------------------------------
# CartPole-v1 (gymnasium/envs/classic_control/cartpole.py)

CARTPOLE_GRAVITY = 9.8
CARTPOLE_MASSCART = 1.0
CARTPOLE_MASSPOLE = 0.1
CARTPOLE_TOTAL_MASS = CARTPOLE_MASSPOLE + CARTPOLE_MASSCART
CARTPOLE_LENGTH = 0.5                       # half the pole's length
CARTPOLE_POLEMASS_LENGTH = CARTPOLE_MASSPOLE * CARTPOLE_LENGTH
CARTPOLE_FORCE_MAG = 10.0
CARTPOLE_TAU = 0.02                         # seconds between state updates
CARTPOLE_THETA_THRESHOLD = 12 * 2 * np.pi / 360
CARTPOLE_X_THRESHOLD = 2.4
CARTPOLE_RESET_BOUND = 0.05
CARTPOLE_MAX_STEPS = 500                    # registration max_episode_steps

#-------------------------------------------------------------------------
# Pendulum-v1 (gymnasium/envs/classic_control/pendulum.py)

PENDULUM_MAX_SPEED = 8.0
PENDULUM_MAX_TORQUE = 2.0
PENDULUM_DT = 0.05
PENDULUM_G = 10.0
PENDULUM_M = 1.0
PENDULUM_L = 1.0
PENDULUM_RESET_THETA = np.pi
PENDULUM_RESET_THETADOT = 1.0
PENDULUM_MAX_STEPS = 200

#-------------------------------------------------------------------------
# MountainCarContinuous-v0 (gymnasium/envs/classic_control/continuous_mountain_car.py)

MOUNTAINCAR_MIN_ACTION = -1.0
MOUNTAINCAR_MAX_ACTION = 1.0
MOUNTAINCAR_MIN_POSITION = -1.2
MOUNTAINCAR_MAX_POSITION = 0.6
MOUNTAINCAR_MAX_SPEED = 0.07
MOUNTAINCAR_GOAL_POSITION = 0.45
MOUNTAINCAR_GOAL_VELOCITY = 0.0
MOUNTAINCAR_POWER = 0.0015
MOUNTAINCAR_GRAVITY_TERM = 0.0025
MOUNTAINCAR_RESET_LOW = -0.6
MOUNTAINCAR_RESET_HIGH = -0.4
MOUNTAINCAR_GOAL_REWARD = 100.0
MOUNTAINCAR_ACTION_COST = 0.1
MOUNTAINCAR_MAX_STEPS = 999

#-------------------------------------------------------------------------
# Acrobot-v1 (gymnasium/envs/classic_control/acrobot.py, "book" dynamics)

ACROBOT_DT = 0.2
ACROBOT_LINK_LENGTH_1 = 1.0
ACROBOT_LINK_LENGTH_2 = 1.0
ACROBOT_LINK_MASS_1 = 1.0
ACROBOT_LINK_MASS_2 = 1.0
ACROBOT_LINK_COM_POS_1 = 0.5
ACROBOT_LINK_COM_POS_2 = 0.5
ACROBOT_LINK_MOI = 1.0
ACROBOT_MAX_VEL_1 = 4 * np.pi
ACROBOT_MAX_VEL_2 = 9 * np.pi
ACROBOT_AVAIL_TORQUE = (-1.0, 0.0, 1.0)
ACROBOT_GRAVITY = 9.8
ACROBOT_RESET_BOUND = 0.1
ACROBOT_MAX_STEPS = 500

#-------------------------------------------------------------------------
# Tabular environments (no external reference)

TABULAR_TRUNCATION_STEPS = 200
