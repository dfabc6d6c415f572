# Kept in step with [project].version in pyproject.toml
__all__ = ["__version__", "version"]

__version__ = version = '0.1.0'
