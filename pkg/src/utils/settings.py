from environs import env

# Dovoljno ovdje pročitati i koristi se kroz cijeli projekt
env.read_env()

APP_NAME: str = env("APP_NAME", "SRST")
LOG_DIR_NAME: str = env("LOG_DIR_NAME", "")
LOG_LEVEL: str = env("LOG_LEVEL", "INFO")
DEFAULT_SEED: int = env.int("DEFAULT_SEED", 0)

# Laplacian solver
DIRECT_SOLVE_THRESHOLD: int = env.int("DIRECT_SOLVE_THRESHOLD", 2000)
CG_RTOL: float = env.float("CG_RTOL", 1e-10)
CG_MAXITER_FACTOR: int = env.int("CG_MAXITER_FACTOR", 20)
SOLVER_TOL_FLOOR: float = env.float("SOLVER_TOL_FLOOR", 1e-12)

# Točnost tablica prijelaza: "mn" -> delta/(m*n), "n5" -> delta/n^5
EPS_BUDGET: str = env("EPS_BUDGET", "mn")

# Oracle i statistički testovi
ENUMERATION_CAP: int = env.int("ENUMERATION_CAP", 100_000)
CHI_SQUARE_ALPHA: float = env.float("CHI_SQUARE_ALPHA", 0.001)
TV_THRESHOLD: float = env.float("TV_THRESHOLD", 0.02)
TV_MAX_SUPPORT: int = env.int("TV_MAX_SUPPORT", 200)

RANDOM_BUFFER_SIZE: int = env.int("RANDOM_BUFFER_SIZE", 4096)
