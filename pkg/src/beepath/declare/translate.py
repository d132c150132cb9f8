"""Fragment instances to DECLARE constraint sets, and their union."""

from __future__ import annotations

from itertools import combinations

from ..frontend.ast import ActRef, Variant
from ..model import END, INIT, FragmentInstance, ProcessSpec, Subprocess
from .core import C, ConstraintInstance, DeclareSpec, Template as T

E_SUBSTITUTION_NOTE = (
    "NotChainSuccession(init, e) and NotChainSuccession(e, init) in the AND-join-in-XOR-join set "
    "use an undefined activity e; it is read as the joining activity {target}"
)
INIT_REPLACED_NOTE = (
    "Init({initial}) from the initial statement is dropped because the specification already "
    "requires Init(init)"
)
INITIAL_NOTE = "the initial statement is translated as Init({initial})"


def _members(ref: ActRef, subs: dict[str, Subprocess]) -> tuple[str, ...]:
    if not ref.subprocess:
        return (ref.name,)
    try:
        return subs[ref.name].members
    except KeyError:
        raise ValueError(f"undeclared subprocess {ref.name}") from None


def _kind(ref: ActRef, subs: dict[str, Subprocess]) -> str | None:
    return subs[ref.name].kind if ref.subprocess else None


def _grouping(refs, subs) -> set[ConstraintInstance]:
    """CoExistence inside AND subprocesses, NotCoExistence inside OR subprocesses."""
    out = set()
    for ref in refs:
        kind = _kind(ref, subs)
        if kind is None:
            continue
        template = T.CO_EXISTENCE if kind == "AND" else T.NOT_CO_EXISTENCE
        out.update(C(template, x, y) for x, y in combinations(_members(ref, subs), 2))
    return out


def _representatives(ref: ActRef, subs) -> tuple[str, ...]:
    # one member stands for an AND group (CoExistence ties the rest to it);
    # an OR group needs every member
    members = _members(ref, subs)
    return members[:1] if _kind(ref, subs) == "AND" else members


def _exclusive(refs, subs) -> set[ConstraintInstance]:
    out = set()
    for r1, r2 in combinations(refs, 2):
        out.update(C(T.NOT_CO_EXISTENCE, x, y)
                   for x in _representatives(r1, subs) for y in _representatives(r2, subs)
                   if x != y)
    return out


def translate_fragment_decl(f: FragmentInstance, subprocesses: dict[str, Subprocess]) -> frozenset[ConstraintInstance]:
    """The constraint set of one fragment, generalized to any number of branches."""
    v, args, subs = f.variant, f.args, subprocesses
    out: set[ConstraintInstance] = set()

    if v is Variant.SEQUENCE:
        out.add(C(T.CHAIN_SUCCESSION, args[0].name, args[1].name))
    elif v is Variant.EVENTUALLY:
        out.add(C(T.SUCCESSION, args[0].name, args[1].name))
    elif v is Variant.REPEAT_SINCE:
        pass
    elif v is Variant.PARALLEL_SPLIT:
        (a,) = _members(args[0], subs)
        out.add(C(T.EXACTLY_ONE, a))
        for ref in args[1:]:
            out.update(C(T.ALTERNATE_SUCCESSION, a, m) for m in _members(ref, subs))
        out |= _grouping(args[1:], subs)
    elif v is Variant.SYNCHRONIZATION:
        (h,) = _members(args[-1], subs)
        out.add(C(T.EXACTLY_ONE, h))
        for ref in args[:-1]:
            out.update(C(T.ALTERNATE_SUCCESSION, m, h) for m in _members(ref, subs))
        out |= _grouping(args[:-1], subs)
    elif v in (Variant.EXCLUSIVE_CHOICE, Variant.AND_SPLIT_IN_XOR_SPLIT):
        (a,) = _members(args[0], subs)
        branches = args[1:]
        for ref in branches:
            for m in _members(ref, subs):
                out.add(C(T.ALTERNATE_PRECEDENCE, m, a))
                out.add(C(T.ALTERNATE_RESPONSE, m, END))
        out |= _grouping(branches, subs)
        out |= _exclusive(branches, subs)
        out.add(C(T.EXACTLY_ONE, a))
        if v is Variant.AND_SPLIT_IN_XOR_SPLIT:
            out.add(C(T.EXACTLY_ONE, END))
        out.add(C(T.NOT_CHAIN_SUCCESSION, a, END))
        out.add(C(T.NOT_CHAIN_SUCCESSION, END, a))
    elif v in (Variant.SIMPLE_MERGE, Variant.AND_JOIN_IN_XOR_JOIN):
        (h,) = _members(args[-1], subs)
        branches = args[:-1]
        for ref in branches:
            out.update(C(T.ALTERNATE_RESPONSE, m, h) for m in _members(ref, subs))
        out |= _grouping(branches, subs)
        out |= _exclusive(branches, subs)
        out.add(C(T.EXACTLY_ONE, h))
        out.add(C(T.INIT, INIT))
        out.add(C(T.NOT_CHAIN_SUCCESSION, INIT, h))
        out.add(C(T.NOT_CHAIN_SUCCESSION, h, INIT))
        if v is Variant.SIMPLE_MERGE:
            out.add(C(T.EXACTLY_ONE, INIT))
    elif v is Variant.XOR_SPLIT_IN_AND_SPLIT:
        (a,) = _members(args[0], subs)
        out.add(C(T.EXACTLY_ONE, a))
        for ref in args[1:]:
            template = T.ALTERNATE_PRECEDENCE if _kind(ref, subs) == "OR" else T.ALTERNATE_SUCCESSION
            for m in _members(ref, subs):
                out.add(C(template, m, a) if template is T.ALTERNATE_PRECEDENCE else C(template, a, m))
        out |= _grouping(args[1:], subs)
    elif v is Variant.XOR_JOIN_IN_AND_JOIN:
        (h,) = _members(args[-1], subs)
        out.add(C(T.EXACTLY_ONE, h))
        for ref in args[:-1]:
            template = T.ALTERNATE_RESPONSE if _kind(ref, subs) == "OR" else T.ALTERNATE_SUCCESSION
            out.update(C(template, m, h) for m in _members(ref, subs))
        out |= _grouping(args[:-1], subs)
    else:
        raise ValueError(f"{v.value} is not a flow fragment")
    return frozenset(out)


def _notes_for(f: FragmentInstance, subs) -> list[str]:
    if f.variant is Variant.AND_JOIN_IN_XOR_JOIN:
        return [E_SUBSTITUTION_NOTE.format(target=_members(f.args[-1], subs)[0])]
    return []


def _alphabet(names, constraints) -> tuple[str, ...]:
    used = {x for c in constraints for x in c.params}
    extra = [x for x in (INIT, END) if x in used]
    return tuple(dict.fromkeys([*names, *extra]))


def fragment_spec(f: FragmentInstance, subprocesses: dict[str, Subprocess]) -> DeclareSpec:
    """A standalone specification for one fragment over the activities it mentions."""
    constraints = translate_fragment_decl(f, subprocesses)
    names = [m for ref in f.args for m in _members(ref, subprocesses)]
    return DeclareSpec(_alphabet(names, constraints), constraints, tuple(_notes_for(f, subprocesses)))


def translate_spec_decl(p: ProcessSpec) -> DeclareSpec:
    """Union of the fragment sets plus the initial-statement constraint."""
    constraints: set[ConstraintInstance] = set()
    notes: list[str] = []
    for f in p.fragments:
        constraints |= translate_fragment_decl(f, p.subprocesses)
        notes.extend(n for n in _notes_for(f, p.subprocesses) if n not in notes)
    if C(T.INIT, INIT) in constraints:
        notes.append(INIT_REPLACED_NOTE.format(initial=p.initial))
    else:
        constraints.add(C(T.INIT, p.initial))
        notes.append(INITIAL_NOTE.format(initial=p.initial))
    return DeclareSpec(_alphabet(p.registry.names, constraints), frozenset(constraints), tuple(notes))
