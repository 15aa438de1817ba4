"""Report builders shared by the command line and the acceptance checks."""

from __future__ import annotations

from fractions import Fraction

from . import __version__
from .approx import (
    SCHEDULES,
    default_chart,
    estimate_alpha_on_curve,
    liouville_search,
    verify_accumulation,
)
from .curves import chart_line, enumerate_positive_relations, general_line, splitting_type, very_free
from .divisor import deg_relation, pic_basis, support_function
from .fan import Fan, validate, walls
from .kleinschmidt import KleinschmidtData, ess_constant, positivity_rank2
from .positivity import effective_cone, kleiman, positivity
from .primitive import (
    HypothesisStarFails,
    IsProjectiveSpace,
    NoCPC,
    NotAmple,
    NotApplicable,
    accumulating_locus,
    beta,
    diagnostics_star,
    primitive_collections,
)


def envelope(command: str, config: dict, fan: Fan | None, result: dict) -> dict:
    return {
        "artifact": "toric-dioph",
        "version": __version__,
        "command": command,
        "config": config,
        "fan_hash": fan.fan_hash() if fan is not None else None,
        "result": result,
    }


def analyze(fan: Fan, D) -> dict:
    fan.require_smooth_complete()
    D = tuple(D)
    pb = pic_basis(fan)
    eff = effective_cone(fan)
    pos = positivity(fan, D)
    pcs = primitive_collections(fan)
    out = {
        "validation": validate(fan).to_dict(),
        "divisor": list(D),
        "pic": {
            "rank": pb.r,
            "basis_relations": [list(row) for row in pb.class_matrix],
            "boundary_classes": [list(c) for c in pb.boundary_classes()],
            "divisor_class": list(pb.class_of(D)),
        },
        "effective_cone": eff.to_dict(),
        "hypotheses_agree": eff.star == eff.star_star,
        "positivity": pos.flags(),
        "primitive_collections": [
            dict(pc.to_dict(), degree=deg_relation(fan, D, pc.relation)) for pc in pcs
        ],
    }
    if pos.nef and pos.big:
        try:
            b = beta(fan, D)
            out["beta"] = b
            if eff.star:
                out["alpha"] = b
        except NoCPC as exc:
            out["beta"] = None
            out["beta_error"] = str(exc)
    else:
        out["beta"] = None
        out["beta_error"] = "divisor is not globally generated and big"
    try:
        Y = accumulating_locus(fan, D)
        out["accumulating_locus"] = dict(Y.to_dict(), meets_only_at_base_point=Y.meets_only_at_q0())
    except NotAmple:
        out["accumulating_locus"] = "upper bound only" if pos.nef and pos.big else "not applicable"
    except (IsProjectiveSpace, HypothesisStarFails) as exc:
        out["accumulating_locus"] = f"not applicable: {type(exc).__name__}"
    try:
        out["diagnostics"] = diagnostics_star(fan, D).to_dict()
    except (HypothesisStarFails, ValueError) as exc:
        out["diagnostics"] = f"not applicable: {type(exc).__name__}"
    return out


def divisor_report(fan: Fan, D) -> dict:
    fan.require_smooth_complete()
    pos = positivity(fan, D)
    nef_k, ample_k = kleiman(fan, D)
    phi = support_function(fan, D)
    return {
        "divisor": list(D),
        "class": list(pic_basis(fan).class_of(D)),
        "positivity": pos.to_dict(),
        "wall_test": {"nef": nef_k, "ample": ample_k},
        "support_function": [list(m) for m in phi.m],
        "wall_degrees": [
            {"wall": list(w.rays), "relation": list(w.relation), "degree": deg_relation(fan, D, w.relation)}
            for w in walls(fan)
        ],
    }


def curve_report(fan: Fan, bound: int, seed: int, D=None, relation=None, max_split: int = 25) -> dict:
    fan.require_smooth_complete()
    rels = [relation] if relation is not None else enumerate_positive_relations(fan, bound)
    rows = []
    for k, rel in enumerate(rels):
        row = {"relation": list(rel.coeffs), "very_free": very_free(fan, rel)}
        if D is not None:
            row["degree"] = deg_relation(fan, D, rel)
        if k < max_split:
            st = splitting_type(fan, rel, seed)
            row["splitting_type"] = list(st.degrees)
            row["mu_min"] = st.mu_min
        rows.append(row)
    return {"bound": bound, "seed": seed, "relations": rows, "count": len(rels)}


def approx_report(fan: Fan, D, B: int, place, gamma=None, height: str = "salberger",
                  dump: int = 0, jobs: int = 1) -> tuple[dict, list]:
    fan.require_smooth_complete()
    chart = default_chart(fan)
    out: dict = {"chart": chart}
    lines = []
    n = fan.dim
    lines.append(("general_line", general_line(fan, chart, [1] * n)))
    for k in range(n):
        m = [0] * n
        m[k] = 1
        lines.append((f"axis_line_{k}", chart_line(fan, chart, m)))
    slopes = {}
    for name, curve in lines:
        est = {s: estimate_alpha_on_curve(fan, D, curve, place, s).to_dict() for s in SCHEDULES[:2]}
        slopes[name] = {"class": list(curve.relation.coeffs), "estimates": est}
    out["slopes"] = slopes
    try:
        b = beta(fan, D)
    except (NoCPC, ValueError):
        b = None
    if gamma is None:
        gamma = b if b is not None else 1
    res = liouville_search(fan, D, Fraction(gamma), B, None, place, height, chart, dump, jobs)
    out["liouville"] = res.to_dict()
    try:
        out["accumulation"] = verify_accumulation(fan, D, None, B, place, height, jobs).to_dict()
    except (NotApplicable, NotAmple, HypothesisStarFails) as exc:
        out["accumulation"] = f"not applicable: {type(exc).__name__}"
    return out, res.rows


def kleinschmidt_report(K: KleinschmidtData, D) -> dict:
    out = {
        "parameters": {"s": K.s, "t": K.t, "a": list(K.a), "b": list(K.b)},
        "fan": K.fan.to_dict(),
        "classes": {
            "C1": list(K.C1.coeffs),
            "C2": list(K.C2.coeffs),
            "C3": list(K.C3.coeffs),
        },
        "sigma0": K.sigma0,
        "positivity_rank2": positivity_rank2(K, D).to_dict(),
    }
    try:
        ess = ess_constant(K, D)
        out["essential_constant"] = dict(ess.to_dict(), very_free=very_free(K.fan, ess.relation))
        out["beta"] = beta(K.fan, D)
    except ValueError as exc:
        out["essential_constant"] = f"not applicable: {exc}"
    return out
