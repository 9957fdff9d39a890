"""Local Dirichlet integrals and D(μ) norms of polynomials.

D_ζ(f) = ||(f - f(ζ))/(z - ζ)||^2_{H^2}: the quotient of one synthetic
division, measured in H^2.
"""
from src.polynomials.polynomial import Polynomial, divide_at, h2_norm_sq
from src.spaces.measure import AtomicMeasure, FunctionTuple


def local_dirichlet(p: Polynomial, zeta) -> float:
    _, quotient = divide_at(p, zeta)
    return h2_norm_sq(quotient)


def dmu_norm_sq(p: Polynomial, measure: AtomicMeasure) -> float:
    """||p||^2_{D(μ)} = ||p||^2_{H^2} + Σ_i a_i D_{ζ_i}(p)."""
    total = h2_norm_sq(p)
    for atom in measure:
        total += atom.weight * local_dirichlet(p, atom.zeta)
    return total


def tuple_dmu_norm_sq(phi: FunctionTuple, measure: AtomicMeasure) -> float:
    """Norm squared of Φ in the direct sum of copies of D(μ)."""
    return sum(dmu_norm_sq(p, measure) for p in phi)


def evaluation_bound_sq(p: Polynomial, zeta) -> float:
    """Upper bound for |p(ζ)|^2: 2(||p||^2_{H^2} + D_ζ(p)).

    From p = p(ζ) + (z - ζ)g: |p(ζ)| <= |p(0)| + |g(0)| <= ||p|| + ||g||.
    """
    return 2.0 * (h2_norm_sq(p) + local_dirichlet(p, zeta))
