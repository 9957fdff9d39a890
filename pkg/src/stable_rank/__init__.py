"""Stable-rank-one reduction of unimodular pairs."""
