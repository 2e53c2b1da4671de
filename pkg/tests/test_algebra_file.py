import pytest

from nlpva.algebra_file import AlgebraFileError, dumps, load, loads
from nlpva.algebras import builtin

VM = '''name = "vm-file"

[generators]
u = {parity = "even", degree = 1}
C = {parity = "even", degree = 1, central = true}

[bracket.u.u]
local = [{n = 1, coeff = "-1/12*C"}]
nonlocal = [{left = "-1", right = "d(u,1)"}, {left = "-d(u,1)", right = "1"}]
'''


def test_loads_matches_builtin():
    A, B = loads(VM), builtin("potential-virasoro-magri")
    assert A.name == "vm-file"
    u = A.parse("u")
    assert A.bracket(u, u, -6).coeffs == B.bracket(B.parse("u"), B.parse("u"), -6).coeffs


@pytest.mark.parametrize("name", ["potential-free-boson", "potential-virasoro-magri",
                                  "potential-affine-sl2", "gurarie-ludwig"])
def test_dump_load_roundtrip(name, tmp_path):
    A = builtin(name)
    path = tmp_path / "alg.toml"
    path.write_text(dumps(A))
    B = load(path)
    assert B.name == A.name
    for g in A.generator_names:
        for h in A.generator_names:
            x, y = A.parse(g), A.parse(h)
            assert A.bracket(x, y, -4).coeffs == B.bracket(B.parse(g), B.parse(h), -4).coeffs


def test_no_generators():
    with pytest.raises(AlgebraFileError, match="no generators"):
        loads('name = "x"\n')


def test_missing_nonlocal_pair_fails_validation():
    text = VM.replace(', {left = "-d(u,1)", right = "1"}', "")
    with pytest.raises(AlgebraFileError, match="validation error: skew-symmetry fails for \\(u, u\\)"):
        loads(text)


def test_bad_expression_position():
    text = VM.replace('"-1/12*C"', '"-1/12*Q"')
    with pytest.raises(AlgebraFileError) as exc:
        loads(text)
    assert exc.value.line == 8


def test_syntax_error_position():
    with pytest.raises(AlgebraFileError, match="syntax error") as exc:
        loads("[generators\nu = 1\n")
    assert exc.value.line == 1


def test_unknown_generator_in_table():
    with pytest.raises(AlgebraFileError, match="unknown generator"):
        loads(VM + '\n[bracket.u.v]\nlocal = []\n')


def test_bad_parity():
    with pytest.raises(AlgebraFileError, match="parity"):
        loads('[generators]\nu = {parity = "weird"}\n')


def test_negative_local_power():
    with pytest.raises(AlgebraFileError, match=">= 0"):
        loads(VM.replace("n = 1", "n = -1"))
