import logging
import numpy as np
import scipy.sparse as sp
import warnings

from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigs

from contagion.graph import DiffusionGraph
from contagion.utils.log import log_usage

from .is_solver import ScoreVector


logger = logging.getLogger(__name__)


def jacobian(g: DiffusionGraph, scores: ScoreVector, damping: float = 1.0):
    r"""
    Jacobian of the damped map at ``scores``, restricted to nonzero scores.

    Unknowns are ordered as the active influences followed by the active
    susceptibilities. With :math:`D_i = \sum_j A_{ij} \hat{S}_j` and
    :math:`E_j = \sum_i A_{ij} \hat{I}_i`:

    .. math::
        \mathbf{J} = (1 - \alpha) \mathbf{1} - \alpha
        \begin{pmatrix} 0 & \hat{f}_i A_{ij} / D_i^2 \\
        \hat{g}_j A_{ij} / E_j^2 & 0 \end{pmatrix}

    Returns:
        3-tuple: The sparse Jacobian, and the indices of the active
        influence and susceptibility nodes.
    """
    act_i = np.flatnonzero(scores.I_hat > 0)
    act_s = np.flatnonzero(scores.S_hat > 0)
    if len(act_i) == 0 or len(act_s) == 0:
        raise ValueError("The graph has no edge between nonzero scores.")

    a_sub = g.adjacency[act_i][:, act_s]
    if a_sub.nnz == 0:
        raise ValueError("The graph has no edge between nonzero scores.")

    denom_i = a_sub @ scores.S_hat[act_s]
    denom_s = a_sub.T @ scores.I_hat[act_i]
    upper = sp.diags(g.f_hat[act_i] / denom_i**2) @ a_sub
    lower = sp.diags(g.g_hat[act_s] / denom_s**2) @ a_sub.T.tocsr()

    identity = sp.identity(len(act_i) + len(act_s), format="csr")
    off = sp.bmat([[None, upper], [lower, None]], format="csr")
    return (1 - damping) * identity - damping * off, act_i, act_s


def gauge_vectors(g: DiffusionGraph, scores: ScoreVector) -> np.ndarray:
    """
    Directions along which the map is invariant, one per connected component
    of the bipartite graph linking active influencers to the active
    susceptible nodes they reach. Each is ``(I_hat, -S_hat)`` restricted to
    its component.

    Returns:
        np.ndarray: Shape ``(n_components, n_active_i + n_active_s)``.
    """
    act_i = np.flatnonzero(scores.I_hat > 0)
    act_s = np.flatnonzero(scores.S_hat > 0)
    a_sub = g.adjacency[act_i][:, act_s]
    n_i, n_s = len(act_i), len(act_s)

    bipartite = sp.bmat([[None, a_sub], [a_sub.T, None]], format="csr")
    n_components, labels = connected_components(bipartite, directed=False)

    base = np.concatenate([scores.I_hat[act_i], -scores.S_hat[act_s]])
    vectors = np.zeros((n_components, n_i + n_s))
    vectors[labels, np.arange(n_i + n_s)] = base
    return vectors


def _power_radius(op: LinearOperator, max_iter: int, tol: float, seed: int) -> float:
    # Geometric growth rate of |J^k v|, stable for complex or opposite pairs
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(op.shape[0])
    v /= np.linalg.norm(v)
    log_norms = []
    estimate_prev = None
    for it in range(max_iter):
        w = op.matvec(v)
        norm = np.linalg.norm(w)
        if norm == 0:
            return 0.0
        log_norms.append(np.log(norm))
        v = w / norm
        if it >= 20 and it % 10 == 0:
            estimate = float(np.exp(np.mean(log_norms[len(log_norms) // 2 :])))
            if estimate_prev is not None and abs(estimate - estimate_prev) < tol * estimate:
                return estimate
            estimate_prev = estimate
    warnings.warn("Power iteration did not converge, returning the last estimate.")
    return float(np.exp(np.mean(log_norms[len(log_norms) // 2 :])))


@log_usage()
def jacobian_spectral_radius(
    g: DiffusionGraph,
    scores: ScoreVector,
    damping: float = 1.0,
    deflate_gauge: bool = True,
    dense_cap: int = 2000,
    max_iter: int = 10_000,
    tol: float = 1e-6,
) -> float:
    """
    Spectral radius of the Jacobian of the map at a (near) fixed point.

    Every gauge direction is an eigenvector of eigenvalue 1 at a fixed
    point, whatever the damping. With ``deflate_gauge`` these directions are
    removed first, so that the value reflects the local contraction of the
    scale-invariant quantities, and stays under 1 for a converging solver.

    Args:
        g (DiffusionGraph): The diffusion network.
        scores (ScoreVector): Scores at which to linearize.
        damping (float): Damping of the map. Default to 1.0
        deflate_gauge (bool): Remove the gauge eigenvalues. Default to True
        dense_cap (int): Largest number of unknowns solved with a dense
            eigen-decomposition. Iterative methods are used above.
            Default to 2000
        max_iter (int): Iterations of the iterative fallback.
            Default to 10000
        tol (float): Relative tolerance of iterative methods.
            Default to 1e-6

    Returns:
        float: The spectral radius.
    """
    assert 0 < damping <= 1, "damping must be within (0, 1]"
    jac, act_i, act_s = jacobian(g, scores, damping=damping)
    n = jac.shape[0]

    vectors = (
        gauge_vectors(g, scores) if deflate_gauge else np.zeros((0, n))
    )
    # Wielandt deflation, vectors have disjoint supports
    normed = vectors / (vectors**2).sum(axis=1, keepdims=True)

    if n <= dense_cap:
        dense = jac.toarray() - vectors.T @ normed
        radius = float(np.max(np.abs(np.linalg.eigvals(dense))))
    else:
        op = LinearOperator(
            (n, n),
            matvec=lambda x: jac @ x - vectors.T @ (normed @ x),
            dtype=float,
        )
        try:
            values = eigs(op, k=1, which="LM", tol=tol, maxiter=max_iter,
                          return_eigenvectors=False)
            radius = float(np.max(np.abs(values)))
        except ArpackNoConvergence:
            logger.info("ARPACK did not converge, falling back to power iteration")
            radius = _power_radius(op, max_iter=max_iter, tol=tol, seed=0)

    logger.info(
        "spectral_radius=%.6f n_unknowns=%d n_gauges=%d", radius, n, len(vectors)
    )
    return radius
