"""
Core configuration for the knot energy laboratory.
Loads settings from environment variables.
"""
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Application
    APP_NAME: str = "knotlab"
    APP_VERSION: str = "1.0"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    # API
    API_V1_PREFIX: str = "/api/v1"

    # Sampling and quadrature
    DEFAULT_SAMPLE_COUNT: int = 512
    DEFAULT_GRID: int = 512
    MAX_DIMENSION: int = 8

    # Regularity / embeddedness thresholds
    REGULARITY_RATIO: float = 1e-8  # min speed must exceed this fraction of max speed
    UNIT_SPEED_TOLERANCE: float = 1e-6
    EMBEDDED_THRESHOLD: float = 1e-3  # chord/arc floor below which a curve counts as self-touching
    REGULAR_SPEED_CUT: float = 0.5  # "regular enough" cut for mollified unit-speed curves

    # Inscribed polygons
    INSCRIBE_SCAN_POINTS: int = 256
    INSCRIBE_TOLERANCE: float = 1e-9

    # Inversions centered on the curve keep this many sample cells away from the center
    INVERSION_EXCLUDED_CELLS: int = 2

    # Experiments
    DEFAULT_SEED: int = 20240601
    DEFAULT_JOBS: int = 1
    OUTPUT_DIR: str = "results"

    class Config:
        env_file = ".env"
        case_sensitive = True


settings = Settings()
