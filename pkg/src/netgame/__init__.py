"""Two-player interdependent network formation games."""
