import logging

from rich.console import Console
from rich.logging import RichHandler

app_logger = logging.getLogger("app")

_configured = False


def configure_logging(level: str = "INFO") -> None:
    """Attach a rich console handler to the application logger (idempotent)."""
    global _configured
    app_logger.setLevel(level.upper())
    if _configured:
        return
    handler = RichHandler(console=Console(stderr=True), rich_tracebacks=False, show_path=False, markup=False)
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    app_logger.addHandler(handler)
    app_logger.propagate = False
    _configured = True
