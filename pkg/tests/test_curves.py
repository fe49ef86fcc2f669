import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from ellinv.curves import (CurveClass, ImplicitCurve, InversionEllipseExact, classify_curve,
                           classify_image, common_points_of_images, homothetic_data,
                           images_orthogonal_at_origin, images_tangent_at_origin, is_homothetic,
                           pushforward, sample_image, sample_implicit, tangent_direction_at_origin)
from ellinv.errors import (EmptyResult, PreconditionError, SingularAtOrigin, UnsupportedDegree,
                           ZeroCurve)
from ellinv.geometry import Point, distance
from ellinv.inversion import Ellipse

E41 = InversionEllipseExact(Fraction(4), Fraction(1))
EFIG = InversionEllipseExact(Fraction(25, 4), Fraction(9, 4))
F = Fraction
X, Y = sp.symbols("x y")


def sympy_pushforward(e, c):
    """Independent oracle: substitute, clear denominators, strip rho factors."""
    a2, b2 = sp.Rational(e.a2.numerator, e.a2.denominator), sp.Rational(e.b2.numerator, e.b2.denominator)
    rho = b2 * X ** 2 + a2 * Y ** 2
    poly = sum(sp.Rational(v.numerator, v.denominator) * X ** i * Y ** j for (i, j), v in c.terms)
    sub = poly.subs({X: a2 * b2 * X / rho, Y: a2 * b2 * Y / rho}, simultaneous=True)
    num = sp.Poly(sp.numer(sp.together(sub)), X, Y)
    r = sp.Poly(rho, X, Y)
    while True:
        q, rem = sp.div(num, r)
        if not rem.is_zero or q.is_zero:
            break
        num = q
    return num


def same_curve(ours, oracle):
    mine = sp.Poly(sum(sp.Rational(v.numerator, v.denominator) * X ** i * Y ** j
                       for (i, j), v in ours.terms), X, Y)
    ratio = sp.cancel(mine.as_expr() / oracle.as_expr())
    return ratio.is_number and ratio != 0


# -- canonical form -----------------------------------------------------------------

def test_canonical_form_and_text():
    c = ImplicitCurve.conic(F(1, 4), 0, 1, F(-1, 2), 0, 0)
    assert c.to_text() == "2,0:1;0,2:4;1,0:-2"
    assert ImplicitCurve.from_text("2,0:1;0,2:4;1,0:-2") == c
    assert ImplicitCurve.line(-2, 3, 0).to_text() == "1,0:2;0,1:-3"
    with pytest.raises(ZeroCurve):
        ImplicitCurve({(1, 0): 0})
    with pytest.raises(ValueError):
        ImplicitCurve({(0, 0): 5})


coef = st.fractions(min_value=-50, max_value=50, max_denominator=30)


@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), coef, min_size=1, max_size=8))
def test_text_roundtrip(terms):
    terms = {m: v for m, v in terms.items() if v}
    if not terms or max(i + j for i, j in terms) == 0:
        return
    c = ImplicitCurve(terms)
    assert ImplicitCurve.from_text(c.to_text()) == c
    assert ImplicitCurve.from_text(c.to_text()).to_text() == c.to_text()
    scaled = ImplicitCurve({m: -F(7, 3) * v for m, v in terms.items()})
    assert scaled == c


# -- pushforward examples --------------------------------------------------------------

def test_line_through_center_is_fixed():
    for e in (E41, EFIG, InversionEllipseExact(F(2), F(7))):
        ln = ImplicitCurve.line(2, -3, 0)
        assert pushforward(e, ln) == ln


def test_line_to_ellipse_through_center():
    img = pushforward(E41, ImplicitCurve.line(1, 0, -2))
    assert img.to_text() == "2,0:1;0,2:4;1,0:-2"
    assert img(0, 0) == 0 and img(2, 0) == 0
    assert same_curve(img, sympy_pushforward(E41, ImplicitCurve.line(1, 0, -2)))


def test_homothetic_conic_coefficient_map():
    c = ImplicitCurve.conic(F(1, 4), 0, 1, 1, 1, 2)
    img = pushforward(E41, c)
    assert img.to_text() == "2,0:1;0,2:4;1,0:2;0,1:2;0,0:2"
    assert homothetic_data(E41, img) == (F(1, 2), F(1, 2), F(1, 2))


def test_homothetic_conic_through_center_goes_to_line():
    c = ImplicitCurve.conic(F(1, 4), 0, 1, 3, -1, 0)
    img = pushforward(E41, c)
    assert img == ImplicitCurve.line(3, -1, 1)


def test_ellipse_itself_fixed():
    assert pushforward(E41, E41.curve()) == E41.curve()


def test_unsupported_degree():
    with pytest.raises(UnsupportedDegree):
        pushforward(E41, ImplicitCurve({(3, 0): 1, (0, 0): -1}))


# -- classification -----------------------------------------------------------------

def test_classification_examples():
    assert classify_image(E41, ImplicitCurve.line(1, 1, 0)) is CurveClass.LINE_THROUGH_CENTER
    assert classify_image(E41, ImplicitCurve.line(1, 0, -2)) is CurveClass.ELLIPSE_THROUGH_CENTER
    circle = ImplicitCurve.conic(1, 0, 1, -2, 0, 0)
    img = pushforward(E41, circle)
    assert classify_curve(E41, img) is CurveClass.CUBIC
    # 16 x^2 + 16 y^2 - 8 x (x^2 + 4 y^2), divided by its content 8
    assert img == ImplicitCurve({(2, 0): 2, (0, 2): 2, (3, 0): -1, (1, 2): -4})
    assert img != ImplicitCurve({(2, 0): 8, (0, 2): 8, (3, 0): -1, (1, 2): -4})
    assert same_curve(img, sympy_pushforward(E41, circle))
    fig = ImplicitCurve.circle(F("-2.8"), F("1.96"), F("1.2"))
    assert classify_image(EFIG, fig) is CurveClass.QUARTIC
    assert same_curve(pushforward(EFIG, fig), sympy_pushforward(EFIG, fig))


def test_cubic_matches_general_displayed_form():
    # generic conic through O: A x^2 + B xy + C y^2 + D x + E y with a^2, b^2 symbolic
    a2, b2 = F(9, 4), F(5)
    A, B, C, D, Ee = F(2), F(-1), F(3), F(5, 2), F(-7)
    e = InversionEllipseExact(a2, b2)
    c = ImplicitCurve.conic(A, B, C, D, Ee, 0)
    img = pushforward(e, c)
    rho = {(2, 0): b2, (0, 2): a2}
    expected = {(2, 0): A * a2 ** 2 * b2 ** 2, (1, 1): B * a2 ** 2 * b2 ** 2, (0, 2): C * a2 ** 2 * b2 ** 2}
    for (i, j), v in rho.items():
        expected[(i + 1, j)] = expected.get((i + 1, j), 0) + D * a2 * b2 * v
        expected[(i, j + 1)] = expected.get((i, j + 1), 0) + Ee * a2 * b2 * v
    assert img == ImplicitCurve(expected)
    assert classify_curve(e, img) is CurveClass.CUBIC


@pytest.mark.parametrize("conic, expected", [
    (ImplicitCurve.conic(F(1, 4), 0, 1, 1, 0, 2), True),
    (ImplicitCurve.conic(1, 0, 1, -2, 0, 0), False),
    (ImplicitCurve.conic(3, 0, 12, 1, 0, -5), True),
    (ImplicitCurve.conic(1, 0, -4, 1, 0, -5), False),
    (ImplicitCurve.conic(1, 1, 4, 1, 0, -5), False),
])
def test_is_homothetic(conic, expected):
    assert is_homothetic(E41, conic) is expected


def test_is_homothetic_rejects_lines():
    with pytest.raises(UnsupportedDegree):
        is_homothetic(E41, ImplicitCurve.line(1, 1, 1))


def random_conic(rng, through_origin, homothetic, e):
    def r():
        return F(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
    if homothetic:
        s = F(int(rng.integers(1, 5)), int(rng.integers(1, 4))) * (1 if rng.random() < 0.5 else -1)
        a, b, c = s / e.a2, F(0), s / e.b2
    else:
        a, b, c = r(), r(), r()
        while a * c > 0 and b == 0 and a * e.a2 == c * e.b2 or (a, b, c) == (0, 0, 0):
            a, b, c = r(), r(), r()
    f = F(0) if through_origin else r() or F(1)
    return ImplicitCurve.conic(a, b, c, r(), r(), f)


def test_classification_table_exact():
    rng = np.random.default_rng(17)
    e = InversionEllipseExact(F(25, 4), F(9, 4))
    for _ in range(40):
        m, n = F(int(rng.integers(-9, 10))), F(int(rng.integers(1, 9)))
        p = F(int(rng.integers(1, 9)), int(rng.integers(1, 5)))
        assert classify_image(e, ImplicitCurve.line(m, n, 0)) is CurveClass.LINE_THROUGH_CENTER
        img = pushforward(e, ImplicitCurve.line(m, n, p))
        assert classify_curve(e, img) is CurveClass.ELLIPSE_THROUGH_CENTER
        d, ee, _ = homothetic_data(e, img)
        assert d * p == m and ee * p == n

        h = random_conic(rng, False, True, e)
        img = pushforward(e, h)
        dh, eh, fh = homothetic_data(e, h)
        assert homothetic_data(e, img) == (dh / fh, eh / fh, 1 / fh)
        assert pushforward(e, img) == h

        h0 = random_conic(rng, True, True, e)
        dh, eh, _ = homothetic_data(e, h0)
        assert pushforward(e, h0) == ImplicitCurve.line(dh, eh, 1)

        c3 = random_conic(rng, True, False, e)
        if c3.linear_part != (0, 0):
            assert classify_image(e, c3) is CurveClass.CUBIC
        c4 = random_conic(rng, False, False, e)
        assert classify_image(e, c4) is CurveClass.QUARTIC


def test_pushforward_agrees_with_sympy_oracle():
    rng = np.random.default_rng(23)
    e = InversionEllipseExact(F(4), F(9, 4))
    for _ in range(8):
        for through, homo in ((True, True), (False, True), (True, False), (False, False)):
            c = random_conic(rng, through, homo, e)
            assert same_curve(pushforward(e, c), sympy_pushforward(e, c))


def test_fixed_family():
    e = E41
    c = ImplicitCurve.conic(F(1, 4), 0, 1, 3, -2, 1)
    assert pushforward(e, c) == c


# -- center properties -----------------------------------------------------------------------

def test_tangent_direction_examples():
    d = tangent_direction_at_origin(ImplicitCurve.from_text("2,0:1;0,2:4;1,0:-2"))
    assert abs(d.dx) <= 1e-15 and abs(abs(d.dy) - 1) <= 1e-15
    d = tangent_direction_at_origin(ImplicitCurve.conic(F(1, 4), 0, 1, 1, 1, 0))
    assert d.dx == pytest.approx(-d.dy, rel=1e-15)
    with pytest.raises(SingularAtOrigin):
        tangent_direction_at_origin(ImplicitCurve.conic(1, 0, 1, 0, 0, 0))
    with pytest.raises(PreconditionError):
        tangent_direction_at_origin(ImplicitCurve.conic(1, 0, 1, 0, 0, 1))


def test_orthogonal_images_examples():
    assert images_orthogonal_at_origin(E41, ImplicitCurve.line(1, 1, 1), ImplicitCurve.line(1, -1, 2))
    assert images_orthogonal_at_origin(EFIG, ImplicitCurve.line(1, 0, 1), ImplicitCurve.line(0, 1, 1))
    assert not images_orthogonal_at_origin(E41, ImplicitCurve.line(1, 1, 1), ImplicitCurve.line(1, 2, 1))


def test_common_points_examples():
    lines = [ImplicitCurve.line(1, 0, -2), ImplicitCurve.line(0, 1, -1), ImplicitCurve.line(1, -2, 0)]
    assert E41.invert(2, 1) == (F(1), F(1, 2))
    assert common_points_of_images(E41, lines, (2, 1))
    assert common_points_of_images(E41, lines[:1], (2, 1))
    assert not common_points_of_images(E41, lines + [ImplicitCurve.line(1, 1, -4)], (2, 1))


def test_tangent_images_examples():
    fam = [ImplicitCurve.line(1, 1, p) for p in (1, 3, -2)]
    assert images_tangent_at_origin(E41, fam)
    assert images_tangent_at_origin(E41, [ImplicitCurve.line(1, 0, -1), ImplicitCurve.line(1, 0, -3)])
    with pytest.raises(PreconditionError):
        images_tangent_at_origin(E41, [ImplicitCurve.line(1, 1, 1), ImplicitCurve.line(1, -1, 1)])


def test_center_properties_random_families():
    rng = np.random.default_rng(31)
    e = EFIG
    for _ in range(300):
        m, n = F(int(rng.integers(-20, 21)), int(rng.integers(1, 7))), F(int(rng.integers(1, 21)), int(rng.integers(1, 7)))
        p, q = (F(int(rng.integers(1, 30)), int(rng.integers(1, 5))) for _ in range(2))
        assert images_orthogonal_at_origin(e, ImplicitCurve.line(m, n, p), ImplicitCurve.line(-n, m, q))
        assert images_tangent_at_origin(e, [ImplicitCurve.line(m, n, p), ImplicitCurve.line(m, n, -q)])
        hx, hy = F(int(rng.integers(1, 9)), 3), F(int(rng.integers(-9, 9)), 2)
        pencil = [ImplicitCurve.line(m, n, -(m * hx + n * hy)), ImplicitCurve.line(-n, m, n * hx - m * hy)]
        assert common_points_of_images(e, pencil, (hx, hy))


# -- sampling ------------------------------------------------------------------------

def test_sample_image_fixed_curve():
    e = Ellipse(a=2, b=1)
    pts = sample_image(e, e.point_at, 50, t_range=(0, 2 * math.pi))
    for i, p in enumerate(pts):
        assert distance(p, e.point_at(2 * math.pi * i / 49)) <= 1e-14


def test_sample_image_membership_line():
    e = Ellipse(a=2, b=1)
    img = pushforward(E41, ImplicitCurve.line(1, 0, -2))
    pts = sample_image(e, lambda t: Point(2, t), 1000, t_range=(-50, 50))
    assert len(pts) == 1000
    assert max(img.scaled_residual(p) for p in pts) <= 1e-9


def test_sample_image_membership_circle_through_center():
    e = Ellipse(a=2, b=1)
    circle = ImplicitCurve.conic(1, 0, 1, -2, 0, 0)
    img = pushforward(E41, circle)
    pts = sample_image(e, lambda t: Point(1 + math.cos(t), math.sin(t)), 1000, t_range=(0.01, 2 * math.pi - 0.01))
    assert max(img.scaled_residual(p) for p in pts) <= 1e-9


def test_sample_image_implicit_source():
    e = Ellipse(a=2.5, b=1.5)
    fig = ImplicitCurve.circle(F("-2.8"), F("1.96"), F("1.2"))
    src = sample_implicit(fig, (-4.1, -1.5, 0.7, 3.2), 200)
    assert max(fig.scaled_residual(p) for p in src) <= 1e-9
    img = pushforward(EFIG, fig)
    pts = sample_image(e, fig, 200, window=(-4.1, -1.5, 0.7, 3.2))
    assert max(img.scaled_residual(p) for p in pts) <= 1e-9


def test_sample_image_empty():
    with pytest.raises(EmptyResult):
        sample_image(Ellipse(a=2, b=1), [Point(0, 0), Point(1e-14, 0)])


@settings(max_examples=50, deadline=None)
@given(st.integers(-9, 9), st.integers(1, 9), st.integers(-9, 9).filter(bool))
def test_point_set_consistency_lines(m, n, p):
    e = Ellipse(a=2.5, b=1.5)
    img = pushforward(EFIG, ImplicitCurve.line(m, n, p))
    d = math.hypot(m, n)
    foot = Point(-m * p / d / d, -n * p / d / d)
    pts = sample_image(e, lambda t: Point(foot.x + n / d * t, foot.y - m / d * t), 200, t_range=(-40, 40))
    assert max(img.scaled_residual(q) for q in pts) <= 1e-9
