# Static defaults for the samplers and the error-metric benchmark.
# Runtime overrides (seed, workers, log level) live in app/app_env.py.

# Prior used by the benchmark: BP(c=2, B0 = uniform on [0, 1])
DEFAULT_CONCENTRATION = 2.0
DEFAULT_MASS = 1.0

DEFAULT_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
DEFAULT_PATHS = 3000

# Parameter column of the comparison table
COMPARISON_SETTINGS = {
    "dls": {"n": 200, "partitions": 200},
    "leekim": {"epsilon": 0.01},
    "lee": {"n": 200, "epsilon": 0.05},
    "pc": {"n": 200},
    "as": {"n": 200},
}
COMPARISON_ORDER = ("dls", "leekim", "lee", "pc", "as")

# Residual mass left by truncating the stick-breaking rounds
TRUNCATION_TOL = 1e-6

ROOT_MAX_ITER = 200
QUANTILE_RESIDUAL_TOL = 1e-10
LEVY_TAIL_ABS_TOL = 1e-12
QUAD_SUBDIVISIONS = 200

# Mixed into the substream key so algorithms never share randomness
ALGORITHM_SALTS = {
    "pc": 11,
    "as": 13,
    "fk": 17,
    "stick": 19,
    "prep5": 23,
    "prep6": 29,
    "dls": 31,
    "leekim": 37,
    "lee": 41,
}
