"""UI module for the TIP-GNN command line."""

from .console import ConsoleUI, Colors

__all__ = ['ConsoleUI', 'Colors']
