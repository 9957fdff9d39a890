"""Dirichlet-type spaces D(mu) for finite atomic measures."""
