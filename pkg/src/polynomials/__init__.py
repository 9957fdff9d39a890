"""Polynomial arithmetic, roots and certified bounds on the closed unit disk."""
