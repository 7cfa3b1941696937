"""
Presentation layer routers.
"""
from app.presentation.routers import experiments, health

__all__ = ["experiments", "health"]
