import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


class Settings:
    # Server settings
    MCP_SERVER_NAME: str = os.getenv("MCP_SERVER_NAME", "sl0-layers")
    MCP_SERVER_VERSION: str = os.getenv("MCP_SERVER_VERSION", "0.1.0")

    # Dictionary settings
    BLOCK_SIZE: int = int(os.getenv("SL0_BLOCK_SIZE", "32"))
    LEVELS: int = int(os.getenv("SL0_LEVELS", "6"))
    WAVELET: str = os.getenv("SL0_WAVELET", "db2")

    # Continuation settings
    OUTER_ITERATIONS: int = int(os.getenv("SL0_OUTER", "5"))
    INNER_ITERATIONS: int = int(os.getenv("SL0_INNER", "10"))
    SIGMA_DECAY: float = float(os.getenv("SL0_SIGMA_DECAY", "0.5"))
    STEP_SIZE: float = float(os.getenv("SL0_MU", "2.0"))

    # Inpainting settings
    LAMBDA_MAX: float = float(os.getenv("SL0_LAMBDA_MAX", "2.0"))
    TV_WEIGHT: float = float(os.getenv("SL0_GAMMA", "0.1"))
    TV_STEP: float = float(os.getenv("SL0_MU_TV", "0.1"))
    TV_EPSILON: float = float(os.getenv("SL0_EPS_TV", "1e-3"))

    # Cache settings
    FACTOR_CACHE_MAX_SIZE: int = int(os.getenv("FACTOR_CACHE_MAX_SIZE", "32"))

    # Logging settings
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")


settings = Settings()
