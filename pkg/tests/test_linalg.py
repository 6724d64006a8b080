from fractions import Fraction

from gaudin.linalg import rank, solve_combination, span_dimension, spans_equal


def F(v):
    return Fraction(v)


def test_rank_full_and_deficient():
    assert rank([[F(1), F(0)], [F(0), F(1)]]) == 2
    assert rank([[F(1), F(2)], [F(2), F(4)]]) == 1
    assert rank([]) == 0
    assert rank([[F(0), F(0)]]) == 0


def test_rank_exactness_with_fractions():
    # a matrix that floating point elimination would misjudge
    eps = Fraction(1, 10**30)
    assert rank([[eps, F(1)], [F(1), F(1) / eps]]) == 1


def test_span_dimension_and_equality():
    a = [{"x": F(1), "y": F(1)}, {"x": F(2), "y": F(2)}]
    b = [{"x": F(3), "y": F(3)}]
    assert span_dimension(a) == 1
    assert spans_equal(a, b)
    c = [{"x": F(1)}]
    assert not spans_equal(a, c)


def test_solve_combination_exact():
    vectors = [{"u": F(1), "v": F(1)}, {"v": F(1), "w": F(2)}]
    target = {"u": F(3), "v": F(5), "w": F(4)}
    coeffs = solve_combination(vectors, target)
    assert coeffs == [F(3), F(2)]


def test_solve_combination_inconsistent():
    vectors = [{"u": F(1)}]
    target = {"u": F(1), "v": F(1)}
    assert solve_combination(vectors, target) is None
