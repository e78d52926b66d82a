from dotenv import load_dotenv

from pydantic_settings import BaseSettings, SettingsConfigDict

# Load environment variables from .env file
load_dotenv()


class Settings(BaseSettings):
    """
    Numerical settings for the RLT relaxation toolkit.
    Every field can be overridden with an RLTQP_ prefixed environment variable.
    """
    model_config = SettingsConfigDict(
        env_prefix="RLTQP_",
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )

    # Feasibility and rank tolerances
    FEASIBILITY_TOL: float = 1e-9
    RANK_TOL: float = 1e-10
    DEDUP_TOL: float = 1e-7

    # LP solver settings
    PIVOT_TOL: float = 1e-10
    LP_FEASIBILITY_TOL: float = 1e-9
    MAX_PIVOTS: int = 100000

    # Certificates and exactness
    CERTIFICATE_TOL: float = 1e-8
    EXACTNESS_RTOL: float = 1e-7
    HESSIAN_TOL: float = 1e-9
    INEXACT_GAP_MARGIN: float = 1e-6

    # Enumeration guards
    ENUMERATION_LIMIT: int = 1_000_000
    LIFTED_FLAT_LIMIT: int = 9
    QPA_MAX_COLUMNS: int = 64
    ORACLE_MAX_FACES: int = 100000
    ORACLE_MAX_NORM: float = 1e8

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


# Create global settings object
settings = Settings()
