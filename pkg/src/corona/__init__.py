"""Koszul identities, Bezout base solutions and the corona lifting induction."""
