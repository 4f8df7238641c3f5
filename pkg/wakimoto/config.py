import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    N_ROOTS = int(os.getenv("WAKIMOTO_N", "2"))
    N_VARS = int(os.getenv("WAKIMOTO_NVARS", "1"))
    WEIGHTS = os.getenv("WAKIMOTO_WEIGHTS", "")
    KAPPA = os.getenv("WAKIMOTO_KAPPA", "builtin:point-at-zero:1,-1")
    LAMBDAS = os.getenv("WAKIMOTO_LAMBDA", "")
    BOX_RADIUS = int(os.getenv("WAKIMOTO_BOX", "1"))
    VECTORS = int(os.getenv("WAKIMOTO_VECTORS", "10"))
    SEED = int(os.getenv("WAKIMOTO_SEED", "0"))
    SUITES = os.getenv("WAKIMOTO_SUITES", "all")
    OUTPUT = os.getenv("WAKIMOTO_OUTPUT", "wakimoto-report.json")
    INSTANCE_LIMIT = os.getenv("WAKIMOTO_INSTANCE_LIMIT", "")
    LOG_LEVEL = os.getenv("WAKIMOTO_LOG_LEVEL", "WARNING")
