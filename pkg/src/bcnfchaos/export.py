"""Serialisation of certificates and plot-ready geometry documents."""

from __future__ import annotations

import json

import numpy as np

from . import escape, region
from .certify import ChaosCertificate, SearchConfig, word_matrices
from .cones import build_cone_interval, check_cone_expansion, slope_fixed_points
from .core import BcnfParams
from .errors import FailureC1, FailureC2, FailureC3
from .kernels import scan_beta
from .region import MARGIN_TOL


def certificate_document(cert: ChaosCertificate) -> dict:
    """Flat key-value form of a certificate with per-matrix cone diagnostics."""
    m = cert.params
    doc = {
        "tau_L": m.tau_L,
        "tau_R": m.tau_R,
        "delta_L": m.delta_L,
        "delta_R": m.delta_R,
        "chi_chaos": cert.chi_chaos,
        "beta": cert.beta,
        "r": cert.r,
        "ell": cert.ell,
        "p_max": cert.p_max,
        "words": list(cert.word_set) if cert.word_set is not None else None,
        "J_lo": cert.cone.lo if cert.cone is not None else None,
        "J_hi": cert.cone.hi if cert.cone is not None else None,
        "c": cert.expansion_c,
        "lambda_bound": cert.lambda_bound,
        "fail_stage": cert.fail_stage if cert.fail_stage is not None else "none",
        "fail_detail": cert.fail_detail,
        "vertices": [list(v) for v in cert.polygon.vertices] if cert.polygon else None,
    }
    details = []
    if cert.fixed_points is not None:
        for j, fp in enumerate(cert.fixed_points, start=1):
            entry = {
                "j": j,
                "m_stab": fp.m_stab,
                "m_unstab": fp.m_unstab,
                "eta": fp.eta,
                "m_blowup": fp.m_blowup,
            }
            if cert.expansion is not None and j <= len(cert.expansion.per_matrix):
                diag = cert.expansion.per_matrix[j - 1]
                entry.update(
                    kind=diag.kind,
                    passed=diag.passed,
                    reason=diag.reason,
                    h_roots=list(diag.roots),
                    c_j=diag.c_j,
                )
            details.append(entry)
    doc["cone_details"] = details
    if cert.polygon is not None:
        doc["marked_points"] = {
            "U": list(cert.polygon.U),
            "V": list(cert.polygon.V),
            "X": list(cert.polygon.X),
            "Y": list(cert.polygon.Y),
            "Z": list(cert.polygon.Z),
        }
    return doc


def format_certificate(cert: ChaosCertificate) -> str:
    return json.dumps(certificate_document(cert), indent=2)


def geometry_document(
    m: BcnfParams,
    beta: float | None = None,
    cfg: SearchConfig | None = None,
    samples: int = 200,
    window_pad: float = 0.5,
) -> dict:
    """Everything needed to plot one parameter point's construction.

    With ``beta`` given, stages C1 and C2 are checked at that exact seed and
    FailureC1/FailureC2 are raised with stage labels when they do not hold;
    otherwise the usual scan picks the seed.  Includes the polygon chain and
    marked points, the partition lines up to max(ell, p_max) + 1, per-matrix
    fixed slopes and norm-gain roots, and dense samplings of the slope and
    gain functions over the padded cone window.
    """
    if cfg is None:
        cfg = SearchConfig()
    if beta is None:
        k, r, ell, _ = scan_beta(
            m.tau_L, m.tau_R, m.delta_L, m.delta_R,
            cfg.beta_min, cfg.beta_step, cfg.beta_max,
            cfg.r_max, cfg.ell_max, MARGIN_TOL,
        )
        if k < 0:
            raise FailureC1("no seed on the grid passed the construction stages")
        beta = cfg.beta_min + k * cfg.beta_step
        poly = region.build_polygon(m, beta, r, ell)
    else:
        r, ell = region.find_escape_indices(m, beta, cfg.r_max, cfg.ell_max)
        poly = region.build_polygon(m, beta, r, ell)
        if not region.check_invariance_conditions(m, poly):
            margins = region.condition_margins(m, poly)
            raise FailureC2(f"placement conditions failed at beta={beta}: margins {margins}")

    p_max = region.compute_p_max(m, poly)
    ladder = escape.build_ladder(m)
    n_lines = max(ell, p_max) + 1
    if ladder.p_star is not escape.INFINITE:
        n_lines = min(n_lines, ladder.p_star)
    lines = [
        {"p": e.p, "m": e.m, "c": e.c} for e in ladder.entries[:n_lines]
    ]

    quads = word_matrices(m, p_max)
    fps = []
    admissible = True
    for j, quad in enumerate(quads, start=1):
        try:
            fp = slope_fixed_points(quad)
            fps.append({"j": j, "m_stab": fp.m_stab, "m_unstab": fp.m_unstab,
                        "eta": fp.eta, "m_blowup": fp.m_blowup, "fp": fp})
        except FailureC3 as exc:
            fps.append({"j": j, "inadmissible": str(exc)})
            admissible = False

    doc = {
        "tau_L": m.tau_L,
        "tau_R": m.tau_R,
        "delta_L": m.delta_L,
        "delta_R": m.delta_R,
        "beta": beta,
        "r": r,
        "ell": ell,
        "p_max": p_max,
        "p_star": "infinite" if ladder.p_star is escape.INFINITE else ladder.p_star,
        "words": list(f"R{'L' * p}" for p in range(p_max + 1)),
        "polygon": [list(v) for v in poly.vertices],
        "marked_points": {
            "U": list(poly.U), "V": list(poly.V), "X": list(poly.X),
            "Y": list(poly.Y), "Z": list(poly.Z),
        },
        "ladder": lines,
    }

    cone_block: dict = {"fixed_points": [
        {k: v for k, v in fp.items() if k != "fp"} for fp in fps
    ]}
    slope_samples = []
    if admissible:
        interval = build_cone_interval([fp["fp"] for fp in fps])
        cone_block["J_lo"] = interval.lo
        cone_block["J_hi"] = interval.hi
        expansion = check_cone_expansion(interval, quads)
        cone_block["expanding"] = expansion.ok
        cone_block["c"] = expansion.c
        cone_block["H_roots"] = [
            {"j": d.index, "kind": d.kind, "roots": list(d.roots),
             "passed": d.passed, "reason": d.reason, "c_j": d.c_j}
            for d in expansion.per_matrix
        ]
        grid = np.linspace(interval.lo - window_pad, interval.hi + window_pad, samples)
        for j, quad in enumerate(quads, start=1):
            slope_samples.append({
                "j": j,
                "m": [float(v) for v in grid],
                "G": [quad.g(float(v)) for v in grid],
                "H": [quad.h(float(v)) for v in grid],
            })
    doc["cone"] = cone_block
    doc["slope_map_samples"] = slope_samples
    return doc


def write_json(doc: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
