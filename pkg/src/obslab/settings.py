import structlog
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = structlog.get_logger(__name__)


class Settings(BaseSettings):
    """
    Process-wide settings shared by every experiment.
    """

    # Upper bound on worker threads used by trial sweeps (OBSLAB_THREADS)
    threads: int = Field(default=1, ge=1)
    # structlog level for the command-line runner
    log_level: str = "INFO"

    # Relative tolerance for gauge inverses and log-domain identities
    tolerance: float = 1e-10
    # Frank-Wolfe stopping rule: duality gap <= fw_tol * energy
    fw_tol: float = 1e-6
    # Frank-Wolfe iteration cap
    fw_max_iter: int = 100_000
    # ln of the default gauge cutoff (strict-formula domain is (0, e^gauge_cutoff_ln])
    gauge_cutoff_ln: float = -3.0

    model_config = SettingsConfigDict(
        env_prefix="OBSLAB_",
        env_file=".env",
        extra="ignore",
    )


# Create a global settings instance
settings = Settings()
logger.debug("settings", settings=settings.model_dump())
