import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

ENV_PREFIX = "COR0N4_"


def _env(name, default):
    return os.getenv(ENV_PREFIX + name, default)


def _int(value):
    # Seeds are often written in hex (0x5EED).
    return int(str(value), 0)


# Solver defaults, overridable per job through the "params" map
RESIDUAL_TOL = float(_env('RESIDUAL_TOL', 1e-9))
ROOT_MARGIN = float(_env('ROOT_MARGIN', 1e-3))
GRID_N = _int(_env('GRID_N', 4096))
SEED = _int(_env('SEED', '0x5EED'))
QUAD_TOL = float(_env('QUAD_TOL', 1e-5))
TRIAL_DEGREE = _int(_env('TRIAL_DEGREE', 6))
MAX_DEGREE = _int(_env('MAX_DEGREE', 64))
MAX_ITERS = _int(_env('MAX_ITERS', 2000))
WORKERS = _int(_env('WORKERS', 1))
LOG_LEVEL = _env('LOG_LEVEL', 'INFO').upper()

# Application settings
DEBUG = os.getenv('DEBUG', 'False').lower() in ('true', '1', 't')
PORT = int(os.getenv('PORT', 5000))
HOST = os.getenv('HOST', '0.0.0.0')
