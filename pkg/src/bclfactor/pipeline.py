"""Pipeline stages behind the command line: check, dilate, factorize, variety, vn."""

from dataclasses import asdict, dataclass, field

import numpy as np

from .bcl import construct_bcl
from .dilation import minimality_rank
from .factor import pull_back, verify_factorization
from .hardy import eval_pencil_batch, inner_check
from .io import (
    matrix_to_json,
    parse_polynomial,
    pencil_to_json,
    pointset_to_json,
    polynomial_to_text,
    triple_to_json,
)
from .opcore import adj, defect, op_norm, spectral_radius
from .variety import distinguished_hint, sample_boundary_variety, vn_certificate

COMMANDS = ("check", "dilate", "factorize", "variety", "vn", "all")
DEFAULT_POLYS = ("z1*z2", "z1 + z2")
IDENTITY_SAMPLES = 64


@dataclass
class JobConfig:
    command: str
    input: str = None
    polys: list = field(default_factory=list)
    tol: float = 1e-10
    purity_margin: float = 1e-6
    trunc_tol: float = 1e-10
    degree: int = None
    samples: int = 2048
    seed: int = 0
    dim: int = 3
    out: str = None
    format: str = "json"

    def validate(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        for name in ("tol", "purity_margin", "trunc_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if self.degree is not None and self.degree < 0:
            raise ValueError("degree must be nonnegative")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be json or csv")
        if self.format == "csv" and self.command != "variety":
            raise ValueError("csv output is only available for the variety command")

    @property
    def threshold(self):
        """Verdict threshold for residuals."""
        return 100 * self.tol


class Report:
    """Residual table, verdicts (each citing value and threshold) and artifacts."""

    def __init__(self, config):
        self.config = config
        self.residuals = {}
        self.verdicts = {}
        self.artifacts = {}

    def verdict(self, name, value, threshold):
        value = float(value)
        self.verdicts[name] = {"value": value, "threshold": float(threshold),
                               "pass": bool(value <= threshold)}

    @property
    def passed(self):
        return all(v["pass"] for v in self.verdicts.values())

    def to_json(self):
        cfg = asdict(self.config)
        cfg.pop("out")
        return {
            "command": self.config.command,
            "config": cfg,
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "verdicts": self.verdicts,
            "artifacts": self.artifacts,
            "passed": self.passed,
        }


def stage_check(report, t1, t2):
    cfg = report.config
    t = t1 @ t2
    eye = np.eye(t1.shape[0])
    lhs = (eye - t1 @ adj(t1)) + t1 @ (eye - t2 @ adj(t2)) @ adj(t1)
    rhs = t2 @ (eye - t1 @ adj(t1)) @ adj(t2) + (eye - t2 @ adj(t2))
    report.residuals.update({
        "norm_T1": op_norm(t1),
        "norm_T2": op_norm(t2),
        "norm_T": op_norm(t),
        "rho_T1": spectral_radius(t1),
        "rho_T2": spectral_radius(t2),
        "rho_T": spectral_radius(t),
        "commutator": op_norm(t1 @ t2 - t2 @ t1),
        "defect_identity": op_norm(lhs - rhs),
    })
    report.verdict("contraction_T1", op_norm(t1), 1 + cfg.tol)
    report.verdict("contraction_T2", op_norm(t2), 1 + cfg.tol)
    report.verdict("commuting", report.residuals["commutator"], cfg.tol)
    report.verdict("pure_T", spectral_radius(t), 1 - cfg.purity_margin)
    if report.passed:
        report.artifacts["defect_ranks"] = {
            name: defect(m, cfg.tol).rank for name, m in (("T1", t1), ("T2", t2), ("T", t))
        }


def stage_dilate(report, t1, t2):
    cfg = report.config
    b = construct_bcl(t1, t2, tol=cfg.tol, trunc_tol=cfg.trunc_tol,
                      purity_margin=cfg.purity_margin, degree=cfg.degree)
    e = b.triple.dim
    zs = np.exp(2j * np.pi * np.arange(IDENTITY_SAMPLES) / IDENTITY_SAMPLES)
    fz = eval_pencil_batch(b.phi, zs)
    gz = eval_pencil_batch(b.psi, zs)
    zi = zs[:, None, None] * np.eye(e)
    product = max(float(np.max(np.linalg.norm(fz @ gz - zi, 2, axis=(1, 2)))),
                  float(np.max(np.linalg.norm(gz @ fz - zi, 2, axis=(1, 2)))))
    inner_phi = inner_check(b.phi, tol=cfg.threshold)
    inner_psi = inner_check(b.psi, tol=cfg.threshold)
    report.residuals.update({f"dilate_{k}": v for k, v in b.residuals.items()})
    report.residuals["dilate_product_identity"] = product
    report.residuals["dilate_inner_phi"] = inner_phi.residual
    report.residuals["dilate_inner_psi"] = inner_psi.residual
    report.residuals["dilate_minimality_rank"] = minimality_rank(b.pi)
    for name in ("intertwine_T1", "intertwine_T2", "intertwine_T"):
        report.verdict(name, b.residuals[name], cfg.threshold)
    report.verdict("gram_equality", b.residuals["gram"], cfg.tol)
    report.verdict("product_identity", product, cfg.threshold)
    report.verdict("inner_phi", inner_phi.residual, cfg.threshold)
    report.verdict("inner_psi", inner_psi.residual, cfg.threshold)
    report.artifacts["dilation"] = {
        "degree": b.degree,
        "tail_bound": float(b.pi.tail_bound),
        "triple": triple_to_json(b.triple),
        "V": matrix_to_json(b.V),
        "Phi": pencil_to_json(b.phi),
        "Psi": pencil_to_json(b.psi),
        "U1": matrix_to_json(b.U1),
        "U2": matrix_to_json(b.U2),
    }
    return b


def stage_factorize(report, bundle):
    cfg = report.config
    f = pull_back(bundle)
    rep = verify_factorization(bundle.T1, bundle.T2, f, bundle.pi)
    report.residuals.update({f"factor_{k}": v for k, v in f.residuals.items()})
    report.residuals.update({f"factor_{k}": v for k, v in rep.items()})
    for name in ("compression_phi", "compression_psi", "compression_phipsi", "compression_psiphi"):
        report.verdict(name, rep[name], cfg.threshold)
    for name in ("joint_invariance_phi", "joint_invariance_psi"):
        report.verdict(name, f.residuals[name], cfg.threshold)
    report.artifacts["factorization"] = {
        "phi": pencil_to_json(f.phi),
        "psi": pencil_to_json(f.psi),
    }
    return f


def stage_variety(report, bundle, include_points):
    cfg = report.config
    pts = sample_boundary_variety(bundle.phi, bundle.psi, cfg.samples, tol=cfg.threshold)
    modulus = max(float(np.max(np.abs(np.abs(pts.lambda1) - 1))),
                  float(np.max(np.abs(np.abs(pts.lambda2) - 1))))
    report.residuals["variety_max_residual1"] = float(np.max(pts.residual1))
    report.residuals["variety_max_residual2"] = float(np.max(pts.residual2))
    report.residuals["variety_torus_modulus"] = modulus
    report.verdict("variety_residual1", report.residuals["variety_max_residual1"], cfg.threshold)
    report.verdict("variety_residual2", report.residuals["variety_max_residual2"], cfg.threshold)
    report.verdict("variety_on_torus", modulus, cfg.threshold)
    summary = {"n_samples": cfg.samples, "n_points": len(pts),
               "distinguished_hint": distinguished_hint(bundle.triple, cfg.tol)}
    if include_points:
        summary["points"] = pointset_to_json(pts)
    report.artifacts["variety"] = summary
    return pts


def stage_vn(report, t1, t2, boundary, polys):
    certs = []
    for i, text in enumerate(polys):
        p = parse_polynomial(text)
        c = vn_certificate(p, t1, t2, boundary)
        certs.append({"poly": text, "canonical": polynomial_to_text(p), "lhs": c.lhs,
                      "rhs": c.rhs, "margin": c.margin, "slack": c.slack, "pass": c.passed})
        # lhs <= rhs + slack, recorded as lhs - rhs against the slack
        report.verdict(f"vn_{i}", c.lhs - c.rhs, c.slack)
    report.artifacts["vn"] = certs


def run_pipeline(config, t1, t2):
    """Run one command on a pair; returns ``(report, boundary_points_or_None)``."""
    config.validate()
    report = Report(config)
    cmd = config.command
    if cmd in ("check", "all"):
        stage_check(report, t1, t2)
        if cmd == "check" or not report.passed:
            return report, None
    polys = list(config.polys)
    if cmd == "vn" and not polys:
        raise ValueError("vn needs at least one --poly")
    if cmd == "all" and not polys:
        polys = list(DEFAULT_POLYS)
    for text in polys:
        parse_polynomial(text)
    bundle = stage_dilate(report, t1, t2)
    if cmd in ("factorize", "all"):
        stage_factorize(report, bundle)
    pts = None
    if cmd in ("variety", "vn", "all"):
        pts = stage_variety(report, bundle, include_points=(cmd == "variety"))
    if cmd in ("vn", "all"):
        stage_vn(report, t1, t2, pts, polys)
    return report, pts
