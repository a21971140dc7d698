RANDOM_SEED = 5
METRICS_SCHEMA = "# vsop-rl metrics schema v1"
CHECKPOINT_MAGIC = b"VSOPCKPT"
CHECKPOINT_VERSION = 1
