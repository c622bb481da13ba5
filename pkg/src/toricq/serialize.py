"""Canonical JSON and DOT serialization.

Exact data travels as rational strings "p/q" so parse(serialize(x)) == x
bit for bit; floats appear only in solver outputs and are tagged with the
tolerances that produced them.  All dumps are key-sorted and newline
terminated, and file writes are atomic.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ValidationError
from .field import FieldScalar, NumberField
from .groups import DiscreteGroupPresentation, Quasilattice
from .moment import RetractionResult, SolverConfig
from .orbits import EquivalenceResult, OrbitClass
from .polytope import Face, FaceLattice, Polytope
from .strata import LinkData, StratificationReport


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".toricq-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- scalars and fields ----------------------------------------------------


def scalar_to_json(s: FieldScalar) -> list[str]:
    return [str(c) for c in s.coeffs]


def scalar_from_json(field: NumberField, data) -> FieldScalar:
    if isinstance(data, (str, int)):
        return field.from_rational(Fraction(data))
    return field.scalar([Fraction(c) for c in data])


def field_to_json(f: NumberField) -> dict:
    return {"minpoly": list(f.minpoly),
            "root_interval": [str(f.root_interval[0]), str(f.root_interval[1])],
            "irreducibility_checked": f.irreducibility_checked}


def field_from_json(data) -> NumberField:
    try:
        minpoly = [int(c) for c in data["minpoly"]]
        lo, hi = (Fraction(x) for x in data["root_interval"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed field declaration: {exc}") from exc
    checked = bool(data.get("irreducibility_checked", True))
    return NumberField(minpoly, (lo, hi), check_irreducible=checked)


def vector_to_json(v) -> list:
    return [scalar_to_json(s) for s in v]


def vector_from_json(field, data) -> list[FieldScalar]:
    return [scalar_from_json(field, entry) for entry in data]


# -- polytopes and instances ----------------------------------------------


def polytope_to_json(p: Polytope) -> dict:
    return {"field": field_to_json(p.field),
            "n": p.n,
            "normals": [vector_to_json(x) for x in p.normals],
            "offsets": [scalar_to_json(s) for s in p.offsets],
            "quasilattice": [vector_to_json(g)
                             for g in p.quasilattice.generators]}


def polytope_from_json(data) -> Polytope:
    try:
        field = field_from_json(data["field"])
        normals = [vector_from_json(field, x) for x in data["normals"]]
        offsets = [scalar_from_json(field, s) for s in data["offsets"]]
        gens = [vector_from_json(field, g) for g in data["quasilattice"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed polytope: {exc}") from exc
    quasilattice = Quasilattice(field, gens)
    p = Polytope(field, normals, offsets, quasilattice)
    if "n" in data and int(data["n"]) != p.n:
        raise ValidationError("declared dimension disagrees with the normals")
    return p


@dataclass
class ProblemInstance:
    polytope: Polytope
    solver: SolverConfig
    seed: int


def solver_to_json(cfg: SolverConfig) -> dict:
    return {"tolerance": cfg.tolerance, "max_iterations": cfg.max_iterations,
            "line_search_shrink": cfg.line_search_shrink,
            "precision_bits": cfg.precision_bits}


def solver_from_json(data) -> SolverConfig:
    return SolverConfig(
        tolerance=float(data.get("tolerance", 1e-9)),
        max_iterations=int(data.get("max_iterations", 100)),
        line_search_shrink=float(data.get("line_search_shrink", 0.5)),
        precision_bits=int(data.get("precision_bits", 53)))


def instance_to_json(inst: ProblemInstance) -> dict:
    out = polytope_to_json(inst.polytope)
    out["solver"] = solver_to_json(inst.solver)
    out["seed"] = inst.seed
    return out


def instance_from_json(data) -> ProblemInstance:
    return ProblemInstance(polytope=polytope_from_json(data),
                           solver=solver_from_json(data.get("solver", {})),
                           seed=int(data.get("seed", 0)))


def load_instance(path: str) -> ProblemInstance:
    try:
        with open(path) as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read instance: {exc}") from exc
    return instance_from_json(data)


# -- complex vectors ---------------------------------------------------------


def complex_vector_to_json(z) -> list:
    return [[float(np.real(w)), float(np.imag(w))] for w in np.asarray(z)]


def complex_vector_from_json(data) -> np.ndarray:
    try:
        return np.array([complex(re, im) for re, im in data], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"malformed complex vector: {exc}") from exc


# -- groups -----------------------------------------------------------------


def presentation_to_json(g: DiscreteGroupPresentation) -> dict:
    return {"I": list(g.chart_index_set),
            "coords": list(g.coords),
            "finite": g.finite,
            "order": g.order if g.order is not None else "infinite",
            "invariant_factors": g.invariant_factors,
            "generators_mod_Z": [vector_to_json(img)
                                 for img in g.generator_images]}


# -- faces ------------------------------------------------------------------


def face_key(f: Face) -> str:
    return str(list(f.index_set))


def face_to_json(f: Face) -> dict:
    return {"index_set": list(f.index_set), "dim": f.dim, "r": f.r,
            "regular": f.regular, "depth": f.depth,
            "vertex_count": len(f.vertex_ids)}


def lattice_to_json(lat: FaceLattice) -> dict:
    return {"faces": {face_key(f): face_to_json(f) for f in lat.faces},
            "polytope_depth": lat.polytope_depth,
            "vertex_coordinates": [vector_to_json(v)
                                   for v in lat.vertex_coords]}


def lattice_to_dot(lat: FaceLattice) -> str:
    lines = ["digraph face_lattice {", "  rankdir=BT;"]
    for f in lat.faces:
        shape = "box" if not f.regular else "ellipse"
        label = f"I={list(f.index_set)}\\ndim {f.dim}"
        if not f.regular:
            label += f"\\nsingular depth {f.depth}"
        lines.append(f'  "{face_key(f)}" [label="{label}", shape={shape}];')
    for lower, upper in lat.covers():
        lines.append(f'  "{face_key(lower)}" -> "{face_key(upper)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- solver output ---------------------------------------------------------


def retraction_to_json(res: RetractionResult, cfg: SolverConfig) -> dict:
    return {"x": complex_vector_to_json(res.x),
            "xi": [float(v) for v in res.xi],
            "y_star": [float(v) for v in res.y_star],
            "residual": res.residual,
            "iterations": res.iterations,
            "zero_set": list(res.zero_set),
            "tolerance": cfg.tolerance}


def orbit_class_to_json(oc: OrbitClass, cfg: SolverConfig) -> dict:
    x, xi = oc.canonical()
    return {"zero_set": list(oc.i_z),
            "closed": oc.closed,
            "face": list(oc.face_E.index_set),
            "exactness": oc.exactness,
            "canonical": {"x": complex_vector_to_json(x),
                          "xi": [float(v) for v in xi],
                          "face": list(oc.face_E.index_set)},
            "retraction": retraction_to_json(oc.retracted, cfg)}


def equivalence_to_json(res: EquivalenceResult, cfg: SolverConfig) -> dict:
    xz, xiz = res.orbit_z.canonical()
    xw, xiw = res.orbit_w.canonical()
    return {"equivalent": res.equivalent,
            "exactness": res.exactness,
            "reason": res.reason,
            "canonical": {"x": complex_vector_to_json(xz),
                          "xi": [float(v) for v in xiz],
                          "face": list(res.orbit_z.face_E.index_set)},
            "canonical_other": {"x": complex_vector_to_json(xw),
                                "xi": [float(v) for v in xiw],
                                "face": list(res.orbit_w.face_E.index_set)}}


# -- stratification ----------------------------------------------------------


def link_to_json(link: LinkData) -> dict:
    return {"face": list(link.face.index_set),
            "facet_labels": list(link.facet_labels),
            "span_basis_labels": list(link.d_F_basis_labels),
            "span_basis": [vector_to_json(v) for v in link.d_F_basis],
            "quasilattice_in_span": [vector_to_json(g)
                                     for g in link.q_f.generators],
            "s_coefficients": [str(s.coeffs[0]) if s.is_rational()
                               else scalar_to_json(s)
                               for s in link.s_coefficients],
            "x0": vector_to_json(link.x0),
            "slice_level": scalar_to_json(link.slice_level),
            "xi0": vector_to_json(link.xi0),
            "cone": {"normals": [vector_to_json(v) for v in link.sigma_normals],
                     "offsets": [scalar_to_json(s) for s in link.sigma_offsets]},
            "cone_kernel": [vector_to_json(v) for v in link.cone_kernel],
            "N_F_dim": link.n_f_dim,
            "N_F0_dim": link.n_f0_dim,
            "delta_F": polytope_to_json(link.delta_F),
            "report": report_to_json(link.recursive_report)}


def report_to_json(report: StratificationReport) -> dict:
    strata = []
    for s in report.strata:
        strata.append({
            "face": list(s.face.index_set),
            "complex_dim": s.complex_dim,
            "depth": s.depth,
            "chart_index_set": list(s.chart_index_set),
            "chart_coords": list(s.chart_coords),
            "chart_model": s.chart_model,
            "chart_group": presentation_to_json(s.chart_group),
            "gamma_I": presentation_to_json(s.gamma_full),
            "link": link_to_json(s.link),
            "b_tilde": {
                "chart_index_set": list(s.b_tilde.chart_index_set),
                "matrix": [[scalar_to_json(a) for a in row]
                           for row in s.b_tilde.matrix],
                "domain_labels": list(s.b_tilde.domain_labels),
                "offsets": [scalar_to_json(a) for a in s.b_tilde.offsets]},
            "link_real_dim_computed": s.link_real_dim_computed,
            "link_real_dim_stated": s.link_real_dim_stated,
            "link_dim_discrepancy": s.link_dim_discrepancy})
    return {"polytope_depth": report.polytope_depth,
            "maximal_piece": {"complex_dim": report.maximal.complex_dim,
                              "regular_face_count": report.maximal.regular_face_count,
                              "chart_count": report.maximal.chart_count,
                              "model": report.maximal.model},
            "strata": strata,
            "poset_nodes": report.poset_nodes,
            "poset_edges": [list(e) for e in report.poset_edges]}


def report_to_dot(report: StratificationReport) -> str:
    lines = ["digraph strata {", "  rankdir=BT;"]
    lines.append('  "max" [label="maximal piece\\ndim '
                 f'{report.maximal.complex_dim}", shape=ellipse];')
    for s in report.strata:
        key = "F" + str(list(s.face.index_set))
        lines.append(f'  "{key}" [label="stratum {list(s.face.index_set)}\\n'
                     f'dim {s.complex_dim}, depth {s.depth}", shape=box];')
    for a, b in report.poset_edges:
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
