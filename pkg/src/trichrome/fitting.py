"""Alternating fit of a triangular structure to a color point cloud.

Each iteration assigns every color to its nearest triangle, then rotates
each colored vertex about the illuminant axis so that the centroid of its
assigned colors lies in the triangle's half-plane. The vertex keeps its
distance to the axis and its height; only the angle moves. Iteration
stops when the largest per-triangle angular motion drops below the
tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .color_space import RADIAL_EPS, to_cylindrical, wrap_angle
from .geometry import rotate_about_axis
from .structure import TriangularStructure, assign, distances_to_structure, validate


@dataclass(frozen=True)
class FitConfig:
    max_iters: int = 100
    angle_tol: float = 1e-4
    min_cluster_size: int = 1
    stride: int = 1  # subsample the cloud by this pixel stride while fitting

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.angle_tol <= 0:
            raise ValueError("angle_tol must be positive")
        if self.stride < 1:
            raise ValueError("stride must be >= 1")


@dataclass
class FitReport:
    iterations: int
    final_objective: float
    # objective after each iteration's assignment step
    objective_trace: list[float] = field(default_factory=list)
    # objective just before that assignment (same structure, previous
    # assignment); reassignment can only improve, so elementwise
    # objective_trace[t] <= pre_assign_trace[t]. The trace as a whole is
    # not guaranteed monotone: the centroid-angle rotation step is not the
    # exact minimizer of the angular subproblem.
    pre_assign_trace: list[float] = field(default_factory=list)
    converged: bool = False


def objective(cloud, s: TriangularStructure, asg) -> float:
    """Sum of squared distances from each color to its assigned triangle."""
    cloud = np.atleast_2d(np.asarray(cloud, dtype=np.float64))
    asg = np.asarray(asg)
    if len(asg) != len(cloud):
        raise ValueError("assignment length does not match cloud length")
    d = distances_to_structure(cloud, s)
    return float(np.sum(d[np.arange(len(cloud)), asg] ** 2))


def fit(cloud, init: TriangularStructure, cfg: FitConfig = FitConfig()):
    """Run the assignment/rotation loop from `init`.

    Returns (structure, assignment, report). The assignment is computed on
    the full cloud even when cfg.stride subsamples the fitting itself.
    """
    cloud = np.atleast_2d(np.asarray(cloud, dtype=np.float64))
    if len(cloud) == 0:
        raise ValueError("cannot fit an empty cloud")
    violations = validate(init)
    if violations:
        raise ValueError("invalid initial structure: " + "; ".join(violations))

    fit_cloud = cloud[:: cfg.stride]
    axis = init.axis
    colored = init.colored.copy()
    thetas = init.thetas.copy()
    trace: list[float] = []
    pre_trace: list[float] = []
    prev_asg = None
    converged = False
    iterations = 0
    rows = np.arange(len(fit_cloud))

    for _ in range(cfg.max_iters):
        iterations += 1
        s = TriangularStructure(axis, colored)
        # the structure re-sorts by angle; remap the previous assignment
        # into the new index order before scoring it
        order = np.argsort(to_cylindrical(colored, axis)[0], kind="stable")
        if prev_asg is not None:
            prev_asg = np.argsort(order)[prev_asg]
        dists = distances_to_structure(fit_cloud, s)
        asg = np.argmin(dists, axis=1)
        sq = dists * dists
        pre_trace.append(
            float(np.sum(sq[rows, prev_asg])) if prev_asg is not None
            else float(np.sum(sq[rows, asg]))
        )
        trace.append(float(np.sum(sq[rows, asg])))
        prev_asg = asg

        colored = s.colored
        thetas = s.thetas

        new_thetas = thetas.copy()
        for i in range(s.k):
            members = fit_cloud[asg == i]
            if len(members) < max(1, cfg.min_cluster_size):
                continue  # empty/tiny cluster keeps its angle this iteration
            centroid = members.mean(axis=0)
            theta_c, r_c, _ = to_cylindrical(centroid, axis)
            if r_c < RADIAL_EPS:
                continue  # centroid on the axis: angle undefined, keep
            new_thetas[i] = theta_c

        deltas = np.abs(wrap_angle(new_thetas - thetas))
        colored = np.stack(
            [
                rotate_about_axis(colored[i], axis, new_thetas[i] - thetas[i])
                for i in range(s.k)
            ]
        )
        thetas = wrap_angle(new_thetas)
        if np.max(deltas) < cfg.angle_tol:
            converged = True
            break

    final = TriangularStructure(axis, colored)
    full_assignment = assign(cloud, final)
    report = FitReport(
        iterations=iterations,
        final_objective=objective(cloud, final, full_assignment),
        objective_trace=trace,
        pre_assign_trace=pre_trace,
        converged=converged,
    )
    return final, full_assignment, report
