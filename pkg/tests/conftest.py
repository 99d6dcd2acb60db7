import random

import pytest

from gensub.construction import Options, build_subtyping
from gensub.hierarchy import ClassDecl, ClassTable, sample_table


@pytest.fixture(scope="session")
def table():
    return sample_table()


@pytest.fixture(scope="session")
def s1(table):
    return build_subtyping(table, 1)


@pytest.fixture(scope="session")
def s2(table):
    return build_subtyping(table, 2)


@pytest.fixture(scope="session")
def s2_intervals(table):
    return build_subtyping(table, 2, Options("intervals"))


def random_table(rng: random.Random, max_classes: int = 10) -> ClassTable:
    """A random valid hierarchy: non-generic classes never extend generic ones."""
    n = rng.randint(1, max_classes)
    decls = []
    generic = set()
    for i in range(n):
        name = f"K{i}"
        is_generic = rng.random() < 0.5
        parents = ["Object"] + [d.name for d in decls if is_generic or d.name not in generic]
        sup = rng.choice(parents)
        decls.append(ClassDecl(name, sup, "X" if is_generic else None))
        if is_generic:
            generic.add(name)
    return ClassTable(decls)
