"""Discrepancy report: each predicted quantity against an independent value.

A verdict is ``MATCH`` when ``abs_diff <= tolerance``, ``MISMATCH``
otherwise, and ``UNVERIFIED`` when there is no predicted value to compare.
Entry order is fixed, so the serialised report is reproducible byte for
byte.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .integral_operator import (
    EigenpairClaim,
    KernelId,
    corollary_convergence,
    eigenfunction_residual,
    kernel_grid,
    lemma_integral,
    midpoint_nodes,
    nystrom_spectrum,
    operator_trace,
)
from .permutations import variance_dk_asymptotic, variance_dk_exact
from .spectra import cosine_symbol_sum, paper_lambda, paper_trace_limit, rayleigh
from .toeplitz_core import triangular_symbol

__all__ = ["ReportConfig", "DiscrepancyEntry", "DiscrepancyReport", "build_discrepancy_report"]

MATCH = "MATCH"
MISMATCH = "MISMATCH"
UNVERIFIED = "UNVERIFIED"

SERIES_TERMS = 10**6


@dataclass(frozen=True)
class ReportConfig:
    m: int = 400
    quad_points: int = 4096
    n_list: tuple[int, ...] = (100, 200, 400)
    k_max: int = 4
    p_max: int = 3
    spectral_tol: float = 1e-3
    quadrature_tol: float = 1e-8

    def __post_init__(self):
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        if self.m < 2 or self.quad_points < 64:
            raise ValueError("need m >= 2 and quad_points >= 64")
        if not self.n_list or self.k_max < 0 or self.p_max < 1:
            raise ValueError("need a non-empty n_list, k_max >= 0 and p_max >= 1")
        if self.k_max + 1 > self.m or min(self.n_list) < self.k_max + 2:
            raise ValueError("k_max too large for m or n_list")


@dataclass(frozen=True)
class DiscrepancyEntry:
    quantity: str
    paper_value: float | str
    computed_value: float
    abs_diff: float | str
    rel_diff: float | str
    tolerance: float
    verdict: str


def _entry(quantity, paper_value, computed, tolerance) -> DiscrepancyEntry:
    computed = float(computed)
    if paper_value is None:
        return DiscrepancyEntry(quantity, "n/a", computed, "n/a", "n/a", float(tolerance), UNVERIFIED)
    paper_value = float(paper_value)
    diff = abs(computed - paper_value)
    rel = diff / abs(paper_value) if paper_value != 0 else "n/a"
    verdict = MATCH if diff <= tolerance else MISMATCH
    return DiscrepancyEntry(quantity, paper_value, computed, diff, rel, float(tolerance), verdict)


@dataclass
class DiscrepancyReport:
    config: ReportConfig
    entries: list[DiscrepancyEntry] = field(default_factory=list)

    def __getitem__(self, quantity: str) -> DiscrepancyEntry:
        for e in self.entries:
            if e.quantity == quantity:
                return e
        raise KeyError(quantity)

    def to_dict(self) -> dict:
        cfg = asdict(self.config)
        cfg["n_list"] = list(cfg["n_list"])
        return {"config": cfg, "entries": [asdict(e) for e in self.entries]}


def _one_sided_cosine_integral(k: int, points: int) -> float:
    x = midpoint_nodes(points)
    return math.fsum((1.0 - x) * np.cos(math.pi * k * x)) / points


def build_discrepancy_report(config: ReportConfig | None = None) -> DiscrepancyReport:
    cfg = config or ReportConfig()
    rep = DiscrepancyReport(cfg)
    add = rep.entries.append
    spec_tol, quad_tol = cfg.spectral_tol, cfg.quadrature_tol
    ks = range(cfg.k_max + 1)

    # (a) convolution representation against the triangular kernel, pointwise
    g = np.linspace(0.0, 1.0, 101)
    diff = np.abs(
        kernel_grid(KernelId.CONV_INDICATOR, g[:, None], g[None, :])
        - kernel_grid(KernelId.TRIANGULAR, g[:, None], g[None, :])
    )
    add(_entry("lemma_pointwise_max_diff", 0.0, diff.max(), 1e-12))

    # (b) the cosine-transform integral
    for k in ks:
        add(_entry(f"lemma_integral_k{k}", paper_lambda(k), lemma_integral(k, cfg.quad_points), quad_tol))

    # (c) residuals of claimed pairs and of the min(x, y) control pairs
    for k in ks:
        claim = EigenpairClaim.paper(k)
        res = eigenfunction_residual(KernelId.TRIANGULAR, claim, cfg.quad_points)
        add(_entry(f"residual_triangular_cos_k{k}", 0.0, res, quad_tol))
    for k in ks:
        res = eigenfunction_residual(KernelId.BROWNIAN_MIN, EigenpairClaim.brownian(k), cfg.quad_points)
        add(_entry(f"residual_brownian_sin_k{k}", 0.0, res, quad_tol))
    for k in ks:
        claim = EigenpairClaim.paper(k)
        add(_entry(f"ode_relation_lambda_k{k}", claim.lam, claim.ode_lambda, quad_tol))

    # (d) operator trace against the sum of claimed eigenvalues
    lam_sum = paper_trace_limit(1, SERIES_TERMS)
    add(_entry("operator_trace_vs_lambda_sum", lam_sum.value, operator_trace(KernelId.TRIANGULAR, cfg.quad_points), spec_tol))

    # (e) Nystrom spectra
    tri = nystrom_spectrum(KernelId.TRIANGULAR, cfg.m, cfg.k_max + 1)
    bro = nystrom_spectrum(KernelId.BROWNIAN_MIN, cfg.m, cfg.k_max + 1)
    for k in ks:
        add(_entry(f"nystrom_triangular_k{k}", paper_lambda(k), tri[k], spec_tol))
    for k in ks:
        add(_entry(f"nystrom_brownian_k{k}", paper_lambda(k), bro[k], spec_tol))
    for k in ks:
        add(_entry(f"nystrom_triangular_vs_brownian_k{k}", bro[k], tri[k], spec_tol))

    # (f) discrete eigenvalue asymptotics of K_n
    cache: dict[int, np.ndarray] = {}
    for k in ks:
        for row in corollary_convergence(k, cfg.n_list, cache):
            add(_entry(f"corollary_k{k}_n{row.n}", row.paper_target, row.value, spec_tol))
    for k in ks:
        rows = corollary_convergence(k, cfg.n_list, cache)
        for a, b in zip(rows, rows[1:]):
            add(_entry(f"corollary_drift_k{k}_n{a.n}_n{b.n}", None, b.drift, spec_tol))

    # (g) traces of powers; literal (1/n) Tr(K_n^p) and Tr((K_n/n)^p)
    n_big = cfg.n_list[-1]
    eig = cache[n_big]
    for p in range(1, cfg.p_max + 1):
        limit = paper_trace_limit(p, SERIES_TERMS).value
        literal = math.fsum(eig**p) / n_big
        scaled = math.fsum((eig / n_big) ** p)
        add(_entry(f"trace_powers_literal_p{p}_n{n_big}", limit, literal, spec_tol))
        add(_entry(f"trace_powers_scaled_p{p}_n{n_big}", limit, scaled, spec_tol))

    # (h) cosine-sum eigenvalue approximation, both normalisations
    for k in ks:
        c = cosine_symbol_sum(n_big, k) / n_big
        one_sided = _one_sided_cosine_integral(k, cfg.quad_points)
        add(_entry(f"cosine_sum_vs_one_sided_integral_k{k}", one_sided, c, spec_tol))
        add(_entry(f"cosine_sum_vs_two_sided_integral_k{k}", 2.0 * one_sided, c, spec_tol))
        add(_entry(f"cosine_sum_vs_eigenvalue_k{k}_n{n_big}", c, eig[k] / n_big, spec_tol))
    ones = np.ones(n_big)
    add(_entry(f"rayleigh_constant_vector_n{n_big}", cosine_symbol_sum(n_big, 0) / n_big,
               rayleigh(triangular_symbol(n_big), ones) / n_big, spec_tol))

    # leading-order variance of displacement counts against the exact value
    n_var = cfg.n_list[-1]
    for k in sorted({0, 1, cfg.k_max}):
        add(_entry(f"variance_leading_form_n{n_var}_k{k}", variance_dk_asymptotic(n_var, k),
                   variance_dk_exact(n_var, k), 2.0 / n_var))
    return rep
