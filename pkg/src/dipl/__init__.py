"""Symbolic skill-induction agents (how / where / when learning), two
simulated tutoring environments, and a learning-curve benchmark harness."""

__version__ = "0.1.0"
