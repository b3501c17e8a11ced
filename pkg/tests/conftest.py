import pytest

from zeroext.semilattice import ModularSemilattice


def diamond(weight=1):
    """Bottom 0, atoms x and y, top 1."""
    return ModularSemilattice.from_covers(
        ["0", "x", "y", "1"],
        [("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")],
        {"0": 0, "x": weight, "y": weight, "1": 2 * weight},
    )


def fan(k=2, weights=None):
    labels = ["0"] + [f"a{i}" for i in range(k)]
    weights = weights or [1] * k
    val = {"0": 0, **{f"a{i}": w for i, w in enumerate(weights)}}
    return ModularSemilattice.from_covers(labels, [("0", a) for a in labels[1:]], val)


def boolean_lattice(dim=3):
    labels = list(range(1 << dim))
    covers = [(s, s | (1 << k)) for s in labels for k in range(dim) if not s & (1 << k)]
    return ModularSemilattice.from_covers(labels, covers)


def pentagon():
    return ModularSemilattice.from_covers(
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")],
    )


def chain(k=3):
    return ModularSemilattice.from_covers(list(range(k)), [(i, i + 1) for i in range(k - 1)])


@pytest.fixture
def semilattices():
    return {"diamond": diamond(), "fan2": fan(2), "fan3": fan(3), "B3": boolean_lattice(3), "chain3": chain(3)}
