from hypothesis import strategies as st

from gensub.terms import ANY, Applied, Cofree, PlainClass, TypeArgument, exact, extends, interval, super_

PLAIN = ["Object", "Number", "Integer", "String", "Null"]
GENERIC = ["List", "LinkedList", "Enum"]


def terms(depth=3, cofree=False, intervals=True):
    """Admittable ground terms over the sample hierarchy, nesting depth <= ``depth``."""
    leaves = st.sampled_from([PlainClass(n) for n in PLAIN])
    if cofree:
        leaves = leaves | st.sampled_from([Cofree(n) for n in GENERIC])
    if depth == 0:
        return leaves
    inner = terms(depth - 1, cofree, intervals)
    return st.one_of(leaves, st.builds(Applied, st.sampled_from(GENERIC), arguments(inner, intervals)))


def arguments(inner, intervals=True):
    options = [
        st.just(ANY),
        st.builds(exact, inner),
        st.builds(extends, inner),
        st.builds(super_, inner),
    ]
    if intervals:
        options.append(st.builds(interval, inner, inner))
    return st.one_of(options)
