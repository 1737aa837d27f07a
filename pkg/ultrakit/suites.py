"""
Check suites driven by the command line.

A suite turns its inputs into a list of picklable cases and checks each
case with a pure top-level function, so cases can be spread over a worker
pool without changing the order of the report.
"""
from __future__ import annotations

import random
from collections import namedtuple
from dataclasses import dataclass
from itertools import product

from . import constants
from .category import FiniteCategory, small_categories
from .descent import (
    TopGroupoid, canonical_cocone, default_battery, descent_search, effective_descent_criterion,
    equivariant_comparison, equivariant_sheaves, kernel_groupoid, universality_check
)
from .documents import load_category, load_groupoid, load_map, load_sheaf, load_space
from .enums import IsoVerdict
from .exceptions import (
    CarrierMismatch, CategoryValidationError, ConfigError, FunctorialityViolation, NotContinuous,
    SpaceValidationError, TheoremMismatch
)
from .maps import IndexSet, ResidueMap, TableMap, UPFamily
from .sheaf import (
    Presheaf, enumerate_etale, enumerate_sheaves, eta_validate, ev_equivalence_check,
    ev_preserves_limits, ev_space, iso_class_representatives, presheaf_to_ultrasheaf,
    pretopos_law_suite, sampled_law_suite, ultrasheaf_to_etale, ultrasheaf_to_presheaf
)
from .space import (
    FiniteSpace, PointFamily, SpaceMap, all_maps, all_topologies, brute_force_topologies,
    convergence_relation, derived_sets, etale_check, interior_by_lattice, limit_points, map_continuous,
    map_open, proper_check, random_space, rel_beta_validate, replay_etale, ucvg, ucvg_to_topology
)
from .ultrafilter import (
    NormalForm, associativity_check, encoding_for, factorial, from_normal_form, lattice_law_violation,
    principal, product_filter_check, pushforward_functoriality_check, uf_iso, uf_pushforward, uf_sum,
    unitor_check
)
from .ultraproduct import (
    BoundedFamily, UPElement, associator_coherence, associator_round_trip, quantifier_exchange,
    reindex_associator_check, saturation_check, unitor_triangles
)
from .upset import UPSet
from .vult import (
    Alex, FinSetVUlt, PtSpace, associativity_holds, probe_families, space_functor, unit_laws_hold
)

Outcome = namedtuple("Outcome", ["instance", "passed", "witness"])
Suite = namedtuple("Suite", ["name", "cases", "check", "needs_inputs"])


@dataclass(frozen=True)
class Bounds:
    max_points: int = constants.DEFAULT_MAX_POINTS
    fiber_bound: int = constants.DEFAULT_FIBER_BOUND
    probe_period: int = constants.PROBE_PERIOD


def _passed(instance, witness=None):
    return Outcome(instance, True, witness)


def _failed(instance, witness):
    return Outcome(instance, False, witness)


def _space_name(space):
    return "{}:{}".format(space.n, ",".join("".join(map(str, sorted(u))) or "-" for u in sorted(space.opens, key=sorted)))


def _spaces_up_to(n):
    for k in range(1, n + 1):
        yield from all_topologies(k)


# validate


def _detect(document):
    if not isinstance(document, dict):
        return None
    if "multiply" in document:
        return "groupoid"
    if "fibers" in document:
        return "sheaf"
    if "map" in document:
        return "map"
    if "arrows" in document:
        return "category"
    if "opens" in document:
        return "space"
    return None


def validate_cases(inputs, bounds, rng):
    return [(name, document) for name, document in inputs]


def check_validate(case, bounds):
    name, document = case
    kind = _detect(document)
    try:
        if kind == "space":
            load_space(document)
        elif kind == "category":
            load_category(document)
        elif kind == "groupoid":
            load_groupoid(document)
        elif kind == "sheaf":
            load_sheaf(document).validate()
        elif kind == "map":
            if not map_continuous(load_map(document)):
                return [_failed(name, {"kind": kind, "error": "not continuous"})]
        else:
            return [_failed(name, {"error": "unrecognised document"})]
    except (SpaceValidationError, CarrierMismatch) as e:
        return [_failed(name, {"kind": kind, "error": str(e)})]
    except (CategoryValidationError, FunctorialityViolation) as e:
        return [_failed(name, {"kind": kind, "error": str(e), "at": e.witness})]
    return [_passed(name, {"kind": kind})]


# etale


def etale_cases(inputs, bounds, rng):
    if inputs:
        return [("document", name, document) for name, document in inputs]
    spaces = [space.to_document() for space in _spaces_up_to(bounds.max_points)]
    cases = [("pair", source, target) for source, target in product(spaces, repeat=2)]
    for _ in range(constants.SAMPLED_MAPS):
        source = random_space(rng, rng.randint(bounds.max_points + 1, bounds.max_points + 2))
        target = random_space(rng, rng.randint(bounds.max_points + 1, bounds.max_points + 2))
        images = tuple(rng.randrange(target.n) for _ in source.points)
        cases.append(("map", None, SpaceMap(source, target, images).to_document()))
    return cases


def _etale_outcome(instance, p, strict):
    try:
        if not map_continuous(p):
            return None
        verdict = etale_check(p)
    except TheoremMismatch as e:
        return _failed(instance, {"error": str(e), "map": e.witness})
    if not replay_etale(p, verdict):
        return _failed(instance, {"error": "verdict does not replay", "map": p.to_document()})
    if strict and not verdict.is_etale:
        return _failed(instance, {"map": p.to_document(), **verdict.to_document()})
    return _passed(instance, verdict.to_document() if strict else None)


def check_etale(case, bounds):
    kind, name, document = case
    if kind == "document":
        p = load_map(document)
        try:
            if not map_continuous(p):
                return [_failed(name, {"error": "not continuous", "map": document})]
        except TheoremMismatch as e:
            return [_failed(name, {"error": str(e), "map": e.witness})]
        return [_etale_outcome(name, p, strict=True)]
    if kind == "pair":
        source, target = load_space(name), load_space(document)
        outcomes = []
        for p in all_maps(source, target):
            outcome = _etale_outcome(f"{_space_name(source)}->{_space_name(target)}:{p.images}", p, strict=False)
            if outcome is not None:
                outcomes.append(outcome)
        return outcomes
    p = load_map(document)
    instance = f"{_space_name(p.source)}->{_space_name(p.target)}:{p.images}"
    outcome = _etale_outcome(instance, p, strict=False)
    return [outcome or _passed(instance, {"continuous": False})]


# convergence


def convergence_cases(inputs, bounds, rng):
    if inputs:
        return [document for _, document in inputs]
    return [space.to_document() for space in _spaces_up_to(bounds.max_points)]


def check_convergence(document, bounds):
    space = load_space(document)
    instance = _space_name(space)
    report = rel_beta_validate(space.n, convergence_relation(space))
    if not report.valid:
        return [_failed(instance, {"axiom": report.axiom, "points": list(report.witness)})]
    for bits in product((0, 1), repeat=space.n):
        subset = frozenset(i for i in space.points if bits[i])
        if derived_sets(space, subset).interior != interior_by_lattice(space, subset):
            return [_failed(instance, {"interior": sorted(subset)})]
    for a, b in product(space.points, repeat=2):
        if ucvg(space, a, PointFamily.principal(b)) != space.specializes(a, b):
            return [_failed(instance, {"principal": [a, b]})]
        expected = frozenset(x for x in space.points if space.specializes(x, b))
        if limit_points(space, PointFamily.principal(b)) != expected:
            return [_failed(instance, {"limits": b})]
        for p in range(2, bounds.probe_period + 1):
            family = UPFamily.from_function(IndexSet.nat(), lambda n, b=b, c=a, p=p: b if n % p == 0 else c, 0, p)
            if ucvg(space, a, PointFamily(factorial(), family)) != space.specializes(a, b):
                return [_failed(instance, {"factorial": [a, b, p]})]
    try:
        for f in all_maps(space, space):
            map_continuous(f)
            map_open(f)
    except TheoremMismatch as e:
        return [_failed(instance, {"error": str(e), "map": e.witness})]
    return [_passed(instance)]


# roundtrip-space


def roundtrip_space_cases(inputs, bounds, rng):
    if inputs:
        return [("space", document) for _, document in inputs]
    cases = [("count", n) for n in range(1, min(bounds.max_points, constants.BRUTE_FORCE_POINTS) + 1)]
    cases += [("space", space.to_document()) for space in _spaces_up_to(bounds.max_points)]
    cases += [
        ("space", random_space(rng, bounds.max_points + 1, rng.random()).to_document())
        for _ in range(constants.SAMPLED_SPACES)
    ]
    return cases


def check_roundtrip_space(case, bounds):
    kind, data = case
    if kind == "count":
        by_preorder = {space.opens for space in all_topologies(data)}
        by_brute_force = {space.opens for space in brute_force_topologies(data)}
        if by_preorder != by_brute_force:
            return [_failed(f"topologies:{data}", {"preorders": len(by_preorder), "brute_force": len(by_brute_force)})]
        return [_passed(f"topologies:{data}", {"count": len(by_preorder)})]
    space = load_space(data)
    rebuilt = ucvg_to_topology(space.n, convergence_relation(space))
    if rebuilt != space:
        return [_failed(_space_name(space), {"space": data, "rebuilt": rebuilt.to_document()})]
    return [_passed(_space_name(space))]


# reconstruct


def reconstruct_cases(inputs, bounds, rng):
    if inputs:
        return [document for _, document in inputs]
    return [space.to_document() for space in _spaces_up_to(bounds.max_points)]


def check_reconstruct(document, bounds):
    space = load_space(document)
    instance = _space_name(space)
    report = ev_equivalence_check(space, bounds.fiber_bound)
    if not report.ok:
        return [_failed(instance, report.to_document())]
    base = PtSpace(space)
    for key, A in iso_class_representatives(enumerate_sheaves(base, bounds.fiber_bound)).items():
        if ev_space(ultrasheaf_to_etale(A), base).canonical_key() != key:
            return [_failed(instance, {"round_trip": A.to_document()})]
    unit = eta_validate(space, probe_period=min(bounds.probe_period, 2))
    if not unit.valid:
        return [_failed(instance, {"unit": unit.witness})]
    return [_passed(instance, report.to_document())]


# alexandroff


def alexandroff_cases(inputs, bounds, rng):
    if inputs:
        return [document for _, document in inputs]
    return [
        category.to_document()
        for category in small_categories(constants.PRESHEAF_OBJECTS, constants.PRESHEAF_PARALLEL)
    ]


def check_alexandroff(document, bounds):
    category = FiniteCategory.from_document(document)
    instance = "category:{}:{}".format(category.objects, len(category.arrows))
    base = Alex(category)
    count = 0
    for A in enumerate_sheaves(base, bounds.fiber_bound):
        count += 1
        P = ultrasheaf_to_presheaf(A)
        if P.violation() is not None:
            return [_failed(instance, {"category": document, "presheaf": P.violation()})]
        back = presheaf_to_ultrasheaf(P, base)
        if back != A or ultrasheaf_to_presheaf(back) != P:
            return [_failed(instance, {"category": document, "sheaf": A.to_document()})]
    for c in range(category.objects):
        y = Presheaf.representable(category, c)
        if y.violation() is not None or ultrasheaf_to_presheaf(presheaf_to_ultrasheaf(y, base)) != y:
            return [_failed(instance, {"category": document, "representable": c})]
    return [_passed(instance, {"presheaves": count})]


# coherence


def _lattice_ultrafilters():
    nat = IndexSet.nat()
    return {
        "principal:0": principal(nat, 0),
        "principal:7": principal(nat, 7),
        "factorial": factorial(),
        "push": uf_pushforward(factorial(), ResidueMap.affine(2, 1)),
        "sum": uf_sum(principal(IndexSet.fin(2), 1), UPFamily.from_list([factorial(), factorial()])),
    }


def coherence_cases(inputs, bounds, rng):
    cases = [("lattice", name, rng.getrandbits(64)) for name in _lattice_ultrafilters()]
    cases += [("finite", k, rng.getrandbits(64)) for k in range(constants.SAMPLED_INSTANCES)]
    cases += [("factorial", p, None) for p in range(2, bounds.probe_period + 1)]
    cases += [("vult", 2, None)]
    return cases


def _random_principal(rng):
    size = rng.randint(1, constants.COHERENCE_CARRIER)
    return principal(IndexSet.fin(size), rng.randrange(size))


def _check_lattice(name, seed):
    mu = _lattice_ultrafilters()[name]
    rng = random.Random(seed)
    for _ in range(constants.LATTICE_QUERIES):
        a, b = UPSet.random(rng, 3, 4), UPSet.random(rng, 3, 4)
        law = lattice_law_violation(mu, a, b)
        if law is not None:
            return _failed(f"lattice:{name}", {"law": law, "queries": [a.to_text(), b.to_text()]})
    if uf_iso(mu, mu).verdict is IsoVerdict.NOT_ISOMORPHIC:
        return _failed(f"lattice:{name}", {"law": "self-isomorphism"})
    return _passed(f"lattice:{name}")


def _check_finite(k, seed):
    rng = random.Random(seed)
    bound = 3
    mu = _random_principal(rng)
    nus = UPFamily.from_list([_random_principal(rng) for _ in mu.carrier.points()])
    middle = encoding_for(mu, nus).carrier
    lams = UPFamily.from_list([_random_principal(rng) for _ in middle.points()])
    nested = sum(lams(t).carrier.size for t in middle.points())
    x = UPElement.from_list([rng.randrange(bound) for _ in range(nested)], bound)
    y = UPElement.from_list([rng.randrange(bound) for _ in middle.points()], bound)
    z = UPElement.from_list([rng.randrange(bound) for _ in mu.carrier.points()], bound)
    fam = BoundedFamily.constant(mu.carrier, bound, range(bound))

    size = rng.randint(1, constants.COHERENCE_CARRIER)
    lam = principal(IndexSet.fin(size), rng.randrange(size))
    point = mu.normal_form().point
    images = [rng.randrange(mu.carrier.size) for _ in range(size)]
    images[lam.normal_form().point] = point
    f = TableMap(lam.carrier, mu.carrier, tuple(images))
    g = TableMap(mu.carrier, IndexSet.fin(2), tuple(rng.randrange(2) for _ in mu.carrier.points()))

    checks = [
        ("associativity", lambda: associativity_check(mu, nus, lams)),
        ("associator coherence", lambda: associator_coherence(mu, nus, lams, x)),
        ("associator round trip", lambda: associator_round_trip(mu, nus, y)),
        ("unitors", lambda: unitor_check(mu) and unitor_triangles(mu, fam, z)),
        ("reindexing", lambda: reindex_associator_check(f, lam, mu, nus, y)),
        ("pushforward", lambda: pushforward_functoriality_check(lam, f, g)),
    ]
    for law, holds in checks:
        if not holds():
            return _failed(f"finite:{k}", {
                "law": law, "mu": mu.to_text(), "nus": nus.to_text(lambda nu: nu.to_text()),
                "lams": lams.to_text(lambda nu: nu.to_text()),
            })
    return _passed(f"finite:{k}")


def _check_factorial(p):
    mu = factorial()
    nat = IndexSet.nat()
    shifted = from_normal_form(NormalForm(nat, shift=p))
    point = principal(IndexSet.fin(2), 1)
    x = UPElement(UPFamily.alternating(range(p)), p)
    fam = BoundedFamily.from_fibers(nat, 2, lambda n: range(1 + n % 2), 0, 2)
    psi = [UPSet.residue(p, 0), UPSet.full()]
    pairs = [(UPSet.at_least(p), UPSet.finite([1])), (UPSet.residue(p, 0), UPSet.full())]
    nus = UPFamily.from_function(nat, lambda s: principal(IndexSet.fin(2), s % 2), 0, 2)
    lams = UPFamily.from_function(nat, lambda j: principal(IndexSet.fin(3), j % 3), 0, 3)
    checks = [
        ("unitors", lambda: unitor_check(mu) and unitor_triangles(mu, fam, x)),
        ("pushforward", lambda: pushforward_functoriality_check(mu, ResidueMap.affine(p, 1), ResidueMap.affine(1, p))),
        ("product filter", lambda: all(product_filter_check(base, point, pairs) is None for base in (mu, shifted))),
        ("quantifier exchange", lambda: len(set(quantifier_exchange(mu, fam, psi))) == 1),
        ("saturation", lambda: saturation_check(mu, fam, 1, p).ok),
        ("associator coherence", lambda: associator_coherence(mu, nus, lams, x)),
        ("reindexing", lambda: reindex_associator_check(ResidueMap.affine(p, 0), mu, mu, nus, x)),
    ]
    for law, holds in checks:
        if not holds():
            return _failed(f"factorial:{p}", {"law": law})
    return _passed(f"factorial:{p}")


def _first_out(X, a):
    """A ⋆-arrow out of a, not the identity when another one exists."""
    arrows = [(b, payload) for b in X.objects for payload in X.star_hom(a, b)]
    others = [(b, payload) for b, payload in arrows if (b, payload) != (a, X.star_identity(a))]
    b, payload = (others or arrows)[0]
    return X.star_arrow(a, b, payload)


def _check_vult(bound, probe_period):
    X = FinSetVUlt(bound)
    hs = [_first_out(X, c) for c in X.objects]
    for mu, family in probe_families(X, probe_period):
        for a in X.objects:
            for f in X.hom(a, mu, family):
                gs = f.codomain.map_values(lambda b: _first_out(X, b))
                if not unit_laws_hold(X, f):
                    return _failed(f"vult:{bound}", {"law": "unit", "arrow": f.to_document()})
                if not associativity_holds(X, f, gs, hs):
                    return _failed(f"vult:{bound}", {"law": "associativity", "arrow": f.to_document()})
    return _passed(f"vult:{bound}")


def check_coherence(case, bounds):
    kind, key, seed = case
    if kind == "lattice":
        return [_check_lattice(key, seed)]
    if kind == "finite":
        return [_check_finite(key, seed)]
    if kind == "factorial":
        return [_check_factorial(key)]
    return [_check_vult(key, bounds.probe_period)]


# laws


def laws_cases(inputs, bounds, rng):
    if inputs:
        return [(document, rng.getrandbits(32)) for _, document in inputs]
    spaces = [space.to_document() for space in _spaces_up_to(min(bounds.max_points, constants.LAW_POINTS))]
    rng.shuffle(spaces)
    return [(document, rng.getrandbits(32)) for document in spaces]


def check_laws(case, bounds):
    document, seed = case
    space = load_space(document)
    instance = _space_name(space)
    violations = pretopos_law_suite(PtSpace(space), bounds.fiber_bound, limit=constants.LAW_SHEAVES)
    violations += sampled_law_suite(
        PtSpace(space), constants.LAW_DIAGRAM_BOUND, constants.LAW_DIAGRAMS, random.Random(seed)
    )
    if violations:
        return [_failed(instance, violations[0])]
    etale = list(enumerate_etale(space, 1))
    for E, F in product(etale, repeat=2):
        if not ev_preserves_limits(space, E, F):
            return [_failed(instance, {"law": "ev preserves products", "maps": [
                E.projection.to_document(), F.projection.to_document()
            ]})]
    return [_passed(instance, {"diagrams": constants.LAW_DIAGRAMS, "fiber_bound": constants.LAW_DIAGRAM_BOUND})]


# descent


def _census_maps(points, rng):
    """Identities and collapses of every space, plus sampled inclusions of a point."""
    spaces = list(_spaces_up_to(points))
    maps = [SpaceMap(space, space, tuple(space.points)) for space in spaces]
    maps += [SpaceMap(space, FiniteSpace.point(), (0,) * space.n) for space in spaces if space.n > 1]
    inclusions = [SpaceMap(FiniteSpace.point(), space, (y,)) for space in spaces if space.n > 1 for y in space.points]
    maps += rng.sample(inclusions, min(constants.DESCENT_SAMPLED, len(inclusions)))
    return [f.to_document() for f in maps]


def descent_cases(inputs, bounds, rng):
    if inputs:
        return [("map", document) for _, document in inputs]
    cases = []
    small = [space.to_document() for space in _spaces_up_to(min(bounds.max_points, constants.DESCENT_POINTS))]
    for source, target in product(small, repeat=2):
        for f in all_maps(load_space(source), load_space(target)):
            if map_continuous(f):
                cases.append(("map", f.to_document()))
    cases.append(("census", _census_maps(min(bounds.max_points, constants.DESCENT_CENSUS_POINTS), rng)))
    cases.append(("equivariant", bounds.fiber_bound))
    return cases


def _universal(F):
    return all(r.ok for r in universality_check(canonical_cocone(kernel_groupoid(F), F), default_battery()))


def _check_census(documents, bounds):
    instance = f"census:{len(documents)}"
    holding = not_surjective = 0
    for document in documents:
        F = space_functor(load_map(document))
        criterion = effective_descent_criterion(F, bounds.probe_period)
        holding += criterion.holds
        if criterion.surjective:
            continue
        not_surjective += 1
        if _universal(F):
            return _failed(instance, {"map": document, "surjective": False, "universal": True})
    return _passed(instance, {"maps": len(documents), "criterion": holding, "not_surjective": not_surjective})


def check_descent(case, bounds):
    kind, data = case
    if kind == "census":
        return [_check_census(data, bounds)]
    if kind == "equivariant":
        G = TopGroupoid.cyclic_action(FiniteSpace.point(), 2, lambda k, x: x)
        report = equivariant_comparison(G, data)
        classes = len(equivariant_sheaves(G, data).iso_classes())
        witness = {**report.to_document(), "iso_classes": classes}
        instance = f"equivariant:Z/2:{data}"
        return [_passed(instance, witness) if report.ok else _failed(instance, witness)]
    f = load_map(data)
    instance = f"{_space_name(f.source)}->{_space_name(f.target)}:{f.images}"
    if not map_continuous(f):
        return [_failed(instance, {"error": "not continuous", "map": data})]
    F = space_functor(f)
    diagram = kernel_groupoid(F)
    criterion = effective_descent_criterion(F, bounds.probe_period)
    reports = universality_check(canonical_cocone(diagram, F), default_battery())
    universal = all(r.ok for r in reports)
    witness = {
        "map": data, "criterion": criterion.holds, "surjective": criterion.surjective,
        "reports": [r.to_document() for r in reports],
    }
    if criterion.holds and not universal:
        return [_failed(instance, witness)]
    if not criterion.surjective and universal:
        return [_failed(instance, witness)]
    return [_passed(instance, {"criterion": criterion.holds, "universal": universal})]


# descent-search


def descent_search_cases(inputs, bounds, rng):
    return [min(bounds.max_points, constants.DESCENT_POINTS)]


def check_descent_search(points, bounds):
    spaces = list(_spaces_up_to(points))
    hits = descent_search(spaces)
    return [_passed(f"search:{points}", {"hits": [
        {"source": h.source, "target": h.target, "map": list(h.images)} for h in hits
    ]})]


# proper


def proper_cases(inputs, bounds, rng):
    if inputs:
        return [("map", document) for _, document in inputs]
    spaces = [space.to_document() for space in _spaces_up_to(bounds.max_points)]
    return [("pair", (source, target)) for source, target in product(spaces, repeat=2)]


def _proper_outcome(f):
    instance = f"{_space_name(f.source)}->{_space_name(f.target)}:{f.images}"
    report = proper_check(f)
    witness = {"closed": report.closed_by_images, "lifting": report.by_lifting}
    if not report.agrees:
        return _failed(instance, {"map": f.to_document(), **witness})
    return _passed(instance, witness)


def check_proper(case, bounds):
    kind, data = case
    if kind == "map":
        f = load_map(data)
        if not map_continuous(f):
            raise NotContinuous("proper maps must be continuous")
        return [_proper_outcome(f)]
    source, target = map(load_space, data)
    return [_proper_outcome(f) for f in all_maps(source, target) if map_continuous(f)]


SUITES = {
    suite.name: suite for suite in (
        Suite("validate", validate_cases, check_validate, True),
        Suite("etale", etale_cases, check_etale, False),
        Suite("convergence", convergence_cases, check_convergence, False),
        Suite("roundtrip-space", roundtrip_space_cases, check_roundtrip_space, False),
        Suite("reconstruct", reconstruct_cases, check_reconstruct, False),
        Suite("alexandroff", alexandroff_cases, check_alexandroff, False),
        Suite("coherence", coherence_cases, check_coherence, False),
        Suite("laws", laws_cases, check_laws, False),
        Suite("descent", descent_cases, check_descent, False),
        Suite("descent-search", descent_search_cases, check_descent_search, False),
        Suite("proper", proper_cases, check_proper, False),
    )
}


def suite_cases(name, inputs, bounds, rng):
    suite = SUITES[name]
    if suite.needs_inputs and not inputs:
        raise ConfigError(f"{name} needs at least one input document")
    return suite.cases(inputs, bounds, rng)
