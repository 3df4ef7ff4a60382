import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wtap import io
from wtap.errors import PreconditionError
from wtap.generators import COST_MODELS, FAMILIES, GeneratorSpec, generate, prufer_tree, three_star
from wtap.instance import LinkClass, classify_link, is_feasible


@given(st.sampled_from(FAMILIES), st.integers(2, 16), st.sampled_from(COST_MODELS), st.integers(0, 2**63))
def test_generated_instances_feasible(family, n, model, seed):
    spec = GeneratorSpec(family, n, Fraction(1), model, 3, seed)
    inst = generate(spec)
    assert len(inst.nodes) == n
    assert is_feasible(inst, inst.links)
    assert all(1 <= l.cost <= 3 for l in inst.links)
    assert generate(spec).digest() == inst.digest()


@given(st.integers(2, 16), st.integers(0, 10_000))
def test_up_cross_family(n, seed):
    inst = generate(GeneratorSpec("up-cross-only", n, Fraction(2), "unit", 1, seed))
    assert inst.root == 0
    assert all(classify_link(inst, l) is not LinkClass.IN_NOT_UP for l in inst.links)


def test_leaf_families():
    for fam in ("leaf-to-leaf", "cycle-on-leaves"):
        inst = generate(GeneratorSpec(fam, 9, Fraction(1), "unit", 1, 4))
        leaves = set(inst.leaves())
        assert all(l.u in leaves and l.v in leaves for l in inst.links)


def test_star_family():
    inst = generate(GeneratorSpec("star", 4, Fraction(1), "unit", 1, 0))
    assert sorted(inst.degree(v) for v in inst.nodes) == [1, 1, 1, 3]


def test_prufer_roundtrip_shape():
    edges = prufer_tree([3, 3, 3], 5)
    assert len(edges) == 4
    assert sum(1 for e in edges if 3 in e) == 4


def test_invalid_specs():
    with pytest.raises(PreconditionError):
        generate(GeneratorSpec("star", 1, Fraction(1), "unit", 1, 0))
    with pytest.raises(PreconditionError):
        generate(GeneratorSpec("nonsense", 5, Fraction(1), "unit", 1, 0))
    with pytest.raises(PreconditionError):
        generate(GeneratorSpec("star", 5, Fraction(1), "gaussian", 1, 0))
    with pytest.raises(PreconditionError):
        generate(GeneratorSpec("star", 5, Fraction(-1), "unit", 1, 0))


@given(st.sampled_from(FAMILIES), st.integers(2, 12), st.integers(0, 10_000))
def test_text_and_json_roundtrip(family, n, seed):
    inst = generate(GeneratorSpec(family, n, Fraction(3, 2), "rational", 3, seed))
    back = io.parse_instance(io.to_text(inst))
    assert back.digest() == inst.digest() and back.root == inst.root
    back = io.parse_instance(json.dumps(io.to_json(inst)))
    assert back.digest() == inst.digest() and back.root == inst.root


def test_parse_errors():
    for text in ("", "wtap 2 1\nedge 0 1\n", "wtap 2 1\nedge 0 1\nlink 0 1 x\n",
                 "wtap 3 1\nedge 0 1\nlink 0 1 1\n", "wtap 2 1\nedge 0 1\nlnk 0 1 1\n",
                 "{not json", '{"edges": [[0, 1]]}', '{"edges": [[0, 1]], "links": [[0, 1, "1/0"]]}'):
        with pytest.raises(PreconditionError):
            io.parse_instance(text)
    with pytest.raises(PreconditionError):
        io.read_instance("/nonexistent/file.txt")


def test_comments_and_dict_links():
    inst = io.parse_instance("# star\nwtap 2 1\nedge 0 1  # only edge\nlink 0 1 3/2\nroot 0\n")
    assert inst.link(0).cost == Fraction(3, 2) and inst.root == 0
    inst = io.parse_instance('{"edges": [[0, 1]], "links": [{"u": 0, "v": 1, "cost": "2"}]}')
    assert inst.link(0).cost == 2


def test_solution_json(star):
    sol = io.solution_json(star, [star.link(0), star.link(1)])
    assert sol["cost"] == "2" and sol["feasible"]
    assert io.parse_solution_values('{"0": "1/2", "2": 1}') == {0: Fraction(1, 2), 2: 1}
    with pytest.raises(PreconditionError):
        io.parse_solution_values("[1, 2]")


def test_three_star_helper():
    assert three_star().digest() == three_star().digest()
