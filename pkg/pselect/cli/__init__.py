from .config import RunConfig, build_run_config
from .main import main

__all__ = [
    'RunConfig',
    'build_run_config',
    'main',
]
