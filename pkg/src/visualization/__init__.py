"""Tabular exports of sampled data for external plotting."""
