import numpy as np
import pytest

from qbd.durrmeyer import (
    JacobiWeight,
    OperatorSpec,
    apply_to_poly,
    durrmeyer_coeff,
    durrmeyer_coeffs,
    eigenvalue_lambda,
    eval_operator,
    inner_product,
    kernel_eval,
    kernel_phi,
    kernel_truncation_order,
    make_spec,
    moment_T,
    operator_function,
    operator_moment,
    q_derivative_of_image,
)
from qbd.errors import ConvergenceError, DomainError
from qbd.poly import Poly
from qbd.qbasis import bernstein_all
from qbd.qcore import (
    RealFunction,
    TailTolerance,
    jackson_integral,
    q_derivative,
    q_number,
    q_pochhammer,
)

ONE = lambda t: np.ones_like(np.asarray(t, dtype=float))
REGULAR = [(0.0, 0.0), (0.5, -0.3), (2.0, 1.0)]


def test_weight_validation():
    JacobiWeight(0.5, -0.3)
    JacobiWeight(-1.0, -1.0)
    for bad in ((-1.0, 0.0), (0.0, -1.0), (-1.2, -1.2)):
        with pytest.raises(DomainError):
            JacobiWeight(*bad)


def test_spec_validation():
    with pytest.raises(DomainError):
        make_spec(0, 0.5, 0.0, 0.0)


def test_coeff_constant_is_exactly_one():
    for (a, b) in REGULAR + [(-1.0, -1.0)]:
        spec = make_spec(4, 0.7, a, b)
        assert np.all(durrmeyer_coeffs(ONE, spec) == 1.0)


def test_coeff_example_linear():
    # f(t)=t, n=1, weight (0,0), k=0: q B_q(2,2)/B_q(1,2) = q [1]/[3]
    spec = make_spec(1, 0.5, 0.0, 0.0)
    assert abs(durrmeyer_coeff(lambda t: t, spec, 0) - 2.0 / 7.0) < 1e-14
    with pytest.raises(DomainError):
        durrmeyer_coeff(lambda t: t, spec, 5)


def test_coeff_denominator_matches_beta_integral():
    # the f=1 denominator of each coefficient is the Beta integral
    n, q, a, b = 3, 0.6, 0.5, -0.3
    for k in range(n + 1):
        den = jackson_integral(
            lambda t: t ** (k + a) * q_pochhammer(q * t, n - k + b, q), 1.0, q
        )
        num = jackson_integral(
            lambda t: t ** (k + a) * q_pochhammer(q * t, n - k + b, q) * (q ** (b + 1) * t),
            1.0,
            q,
        )
        spec = make_spec(n, q, a, b)
        assert abs(durrmeyer_coeff(lambda t: t, spec, k) - num / den) < 1e-12


def test_endpoint_case_coefficients():
    spec = make_spec(3, 0.5, -1.0, -1.0)
    f = lambda t: np.asarray(t, dtype=float) ** 2 + 1.0
    c = durrmeyer_coeffs(f, spec)
    assert c[0] == 1.0 and c[3] == 2.0
    bad = RealFunction(fn=lambda t: 1.0 / t, at_zero=False)
    with pytest.raises(DomainError):
        durrmeyer_coeffs(bad, spec)


def test_eval_operator_first_moment_identity():
    # [n+a+b+2](M f1(x) - x) = q^{b+1}[a+1] - x[a+b+2]
    for (a, b) in REGULAR:
        for (n, q) in ((4, 0.5), (6, 0.7), (16, 0.99)):
            img = operator_function(lambda t: t, make_spec(n, q, a, b))
            for x in (0.0, 0.3, 0.8, 1.0):
                lhs = q_number(n + a + b + 2, q) * (img(x) - x)
                rhs = q ** (b + 1) * q_number(a + 1, q) - x * q_number(a + b + 2, q)
                assert abs(lhs - rhs) < 1e-11


def test_eval_operator_constants_and_endpoint_case():
    spec = make_spec(2, 0.5, 0.0, 0.0)
    for x in np.linspace(0, 1, 7):
        assert abs(eval_operator(ONE, spec, x) - 1.0) < 1e-14
    spec5 = make_spec(3, 0.6, -1.0, -1.0)
    f = lambda t: np.asarray(t, dtype=float) ** 2
    assert eval_operator(f, spec5, 0.0) == 0.0
    assert eval_operator(f, spec5, 1.0) == 1.0


def test_contraction():
    for (a, b) in REGULAR:
        spec = make_spec(5, 0.7, a, b)
        f = lambda t: np.sin(5.0 * np.asarray(t, dtype=float))
        depth = kernel_truncation_order(spec)
        nodes = spec.q.q ** (np.arange(depth) + b + 1.0)
        bound = float(np.max(np.abs(f(nodes))))
        img = operator_function(f, spec)
        assert float(np.max(np.abs(img(np.linspace(0, 1, 101))))) <= bound + 1e-10


def test_self_adjointness():
    rng = np.random.default_rng(6)
    specs = [make_spec(n, q, a, b) for (a, b) in REGULAR for (n, q) in ((3, 0.5), (6, 0.9))]
    for i in range(12):
        f = Poly(tuple(rng.uniform(-1, 1, 5)))
        g = Poly(tuple(rng.uniform(-1, 1, 5)))
        spec = specs[i % len(specs)]
        w, q = spec.weight, spec.q
        mf = operator_function(f, spec)
        mg = operator_function(g, spec)
        lhs = inner_product(mf, g, w, q)
        rhs = inner_product(f, mg, w, q)
        ref = inner_product(f, g, w, q)
        assert abs(lhs - rhs) < 1e-9 * (1.0 + abs(ref))


def test_inner_product_symmetry_and_positivity():
    w = JacobiWeight(0.5, -0.3)
    f = Poly((0.3, 1.0))
    g = Poly((1.0, -0.5, 0.2))
    assert inner_product(f, g, w, 0.7) == inner_product(g, f, w, 0.7)
    assert inner_product(f, f, w, 0.7) > 0.0


def test_inner_product_matches_jackson_form():
    # second displayed q-integral form of the bilinear form as oracle
    w = JacobiWeight(0.5, -0.3)
    q = 0.7
    f = Poly((0.3, 1.0))
    g = Poly((1.0, -0.5, 0.2))
    direct = inner_product(f, g, w, q)
    shift = q ** (w.beta + 1.0)
    oracle = q ** ((w.alpha + 1) * (w.beta + 1)) * jackson_integral(
        lambda t: t**w.alpha * q_pochhammer(q * t, w.beta, q) * f(shift * t) * g(shift * t),
        1.0,
        q,
    )
    assert abs(direct - oracle) < 1e-12 * max(1.0, abs(direct))


def test_inner_product_endpoint_case():
    w = JacobiWeight(-1.0, -1.0)
    f = lambda t: np.asarray(t, dtype=float) * (1.0 - np.asarray(t, dtype=float))
    assert abs(inner_product(f, ONE, w, 0.5) - 0.5) < 1e-13
    with pytest.raises(DomainError):
        inner_product(ONE, ONE, w, 0.5)


def test_inner_product_divergence():
    w = JacobiWeight(0.0, 0.0)
    tol = TailTolerance(eps=1e-14, max_terms=4000)
    with np.errstate(over="ignore"):
        with pytest.raises(ConvergenceError):
            inner_product(lambda t: t**-0.7, lambda t: t**-0.7, w, 0.5, tol)


def test_kernel_mass_and_cross_form():
    rng = np.random.default_rng(7)
    for (a, b) in REGULAR + [(-1.0, -1.0)]:
        for (n, q) in ((3, 0.5), (5, 0.9)):
            spec = make_spec(n, q, a, b)
            for x in (0.0, 0.37, 1.0):
                assert abs(kernel_eval(ONE, spec, x) - 1.0) < 1e-12
            f = Poly(tuple(rng.uniform(-1, 1, 4)))
            for x in (0.1, 0.62):
                assert abs(kernel_eval(f, spec, x) - eval_operator(f, spec, x)) < 1e-9


def test_kernel_phi_values():
    spec = make_spec(2, 0.5, 0.5, -0.3)
    # masses over the truncated range apply the operator to f = 1
    total = sum(kernel_phi(spec, j, 0.4) for j in range(kernel_truncation_order(spec)))
    assert abs(total - 1.0) < 1e-10
    # at x = 0 only the k = 0 basis function survives
    q, a, b = 0.5, 0.5, -0.3
    j = 3
    u_j = (1 - q) * q ** (j * (a + 1)) * q_pochhammer(q ** (j + 1), b, q)
    from qbd.qcore import q_beta, q_binomial

    vinv0 = q_binomial(2, 0, q) * q_beta(a + 1, 2 + b + 1, q)
    node = q ** (j + b + 1)
    want = u_j / vinv0 * bernstein_all(spec.basis, node)[0]
    assert abs(kernel_phi(spec, j, 0.0) - want) < 1e-10 * want
    assert kernel_phi(spec, j, 0.37) >= 0.0
    with pytest.raises(DomainError):
        kernel_phi(spec, -1, 0.5)


def test_kernel_row_beyond_cache():
    spec = make_spec(3, 0.5, 0.0, 0.0)
    deep = kernel_truncation_order(spec) + 5
    assert kernel_phi(spec, deep, 0.5) < 1e-12


def test_apply_to_poly_examples():
    spec = make_spec(2, 0.5, 0.0, 0.0)
    assert apply_to_poly(Poly((1.0,)), spec).coeffs == (1.0,)
    img = apply_to_poly(Poly((0.0, 1.0)), spec)
    L4 = q_number(4, 0.5)
    assert np.allclose(img.as_array(2), [0.5 / L4, 1 - 1.5 / L4], atol=1e-14)
    with pytest.raises(DomainError):
        apply_to_poly(Poly((0.0, 0.0, 0.0, 1.0)), spec)


def test_apply_to_poly_degree_preservation():
    rng = np.random.default_rng(8)
    for (a, b) in REGULAR + [(-1.0, -1.0)]:
        spec = make_spec(6, 0.7, a, b)
        for d in range(7):
            coeffs = rng.uniform(-1, 1, d + 1)
            coeffs[-1] = coeffs[-1] or 1.0
            img = apply_to_poly(Poly(tuple(coeffs)), spec)
            assert img.degree == d


def test_apply_to_poly_matches_jackson_evaluation():
    rng = np.random.default_rng(9)
    for (a, b) in REGULAR + [(-1.0, -1.0)]:
        for (n, q) in ((5, 0.5), (6, 0.9)):
            spec = make_spec(n, q, a, b)
            p = Poly(tuple(rng.uniform(-1, 1, 4)))
            img = apply_to_poly(p, spec)
            g = operator_function(p, spec)
            for x in (0.1, 0.5, 0.92):
                assert abs(img(x) - g(x)) < 1e-11


def test_endpoint_case_preserves_affine():
    spec = make_spec(5, 0.6, -1.0, -1.0)
    img = apply_to_poly(Poly((0.25, 0.5)), spec)
    assert np.allclose(img.as_array(2), [0.25, 0.5], atol=1e-15)


def test_eigenvalue_lambda():
    w = JacobiWeight(0.3, 1.2)
    assert eigenvalue_lambda(4, 0, w, 0.5) == 1.0
    assert eigenvalue_lambda(4, 5, w, 0.5) == 0.0
    q = 0.5
    want = q ** (w.alpha + w.beta + 2) * q_number(4, q) / q_number(4 + w.alpha + w.beta + 2, q)
    assert abs(eigenvalue_lambda(4, 1, w, q) - want) < 1e-15


def test_moment_examples_and_oracle():
    spec = make_spec(4, 0.5, 0.0, 0.0)
    assert moment_T(spec, 0, 0.3) == 1.0

    def direct(spec, m, x):
        n, q, w = spec.n, spec.q.q, spec.weight
        b = bernstein_all(spec.basis, x)
        tot = 0.0
        for k in range(n + 1):
            wfun = lambda t: t ** (k + w.alpha) * q_pochhammer(q * t, n - k + w.beta, q)
            num = jackson_integral(lambda t: wfun(t) * (x - t) ** m, 1.0, q)
            den = jackson_integral(wfun, 1.0, q)
            tot += b[k] * num / den
        return tot

    for m in (1, 2, 3):
        for x in (0.2, 0.7):
            assert abs(moment_T(spec, m, x) - direct(spec, m, x)) < 1e-12

    # the argument-shifted variant has the first-moment closed form
    for x in (0.0, 0.4, 1.0):
        want = -(0.5 * q_number(1, 0.5) - x * q_number(2, 0.5)) / q_number(6, 0.5)
        assert abs(operator_moment(spec, 1, x) - want) < 1e-14

    with pytest.raises(DomainError):
        moment_T(make_spec(2, 0.5, -1.0, -1.0), 1, 0.5)


def test_moment_scaled_bounds():
    # sup_x [n]^{m/2} |T_{n,m}| stays bounded along q_n = 1 - 1/n
    xs = np.linspace(0, 1, 51)
    for m in (2, 4):
        vals = []
        for n in (4, 8, 16, 32):
            q = 1 - 1 / n
            spec = make_spec(n, q, 0.0, 0.0)
            ln = q_number(n, q)
            vals.append(max(ln ** (m / 2) * abs(moment_T(spec, m, x)) for x in xs))
        assert max(vals) < 1.0
        assert all(v2 <= 2 * v1 for v1, v2 in zip(vals, vals[1:]))


def test_q_derivative_of_image_identity():
    p = Poly((0.2, -1.0, 0.0, 0.5))
    for (a, b) in REGULAR:
        for (n, q) in ((1, 0.6), (3, 0.5), (4, 0.7)):
            spec = make_spec(n, q, a, b)
            g = operator_function(p, spec)
            for x in (0.2, 0.5, 0.85):
                assert abs(q_derivative(g, x, q) - q_derivative_of_image(p, spec, x)) < 1e-9
    assert q_derivative_of_image(ONE, make_spec(3, 0.5, 0.0, 0.0), 0.4) == pytest.approx(0.0, abs=1e-12)


def test_q_derivative_of_image_endpoint_case():
    # the (-1,-1) image derivative lands on the (0,0)-weight operator
    p = Poly((0.3, 0.7, -0.4))
    spec = make_spec(4, 0.6, -1.0, -1.0)
    g = operator_function(p, spec)
    for x in (0.2, 0.5, 0.85):
        assert abs(q_derivative(g, x, 0.6) - q_derivative_of_image(p, spec, x)) < 1e-9


def test_commutation_between_degrees():
    p = Poly((0.3, 0.2, -0.7))
    xs = np.linspace(0, 1, 21)
    for (n, m) in ((3, 5), (4, 6), (2, 6)):
        spn = make_spec(n, 0.7, 0.5, -0.3)
        spm = make_spec(m, 0.7, 0.5, -0.3)
        ab = apply_to_poly(apply_to_poly(p, spn), spm)
        ba = apply_to_poly(apply_to_poly(p, spm), spn)
        assert float(np.max(np.abs(ab(xs) - ba(xs)))) < 1e-8


def test_shape_preservation_on_grid():
    xs = np.linspace(0, 1, 41)
    spec = make_spec(8, 0.7, 0.0, 0.0)
    inc = operator_function(lambda t: np.asarray(t, dtype=float) ** 3, spec)
    assert np.min(np.diff(inc(xs))) >= -1e-10
    dec = operator_function(lambda t: -np.asarray(t, dtype=float), spec)
    assert np.max(np.diff(dec(xs))) <= 1e-10
    convex = operator_function(lambda t: np.asarray(t, dtype=float) ** 2, spec)
    assert np.min(np.diff(convex(xs), 2)) >= -1e-10


def test_sign_change_diminishing():
    from qbd.qbasis import sign_changes

    spec = make_spec(8, 0.7, 0.0, 0.0)
    f = lambda t: np.sin(6.0 * np.asarray(t, dtype=float))
    depth = kernel_truncation_order(spec)
    nodes = spec.q.q ** (np.arange(depth) + 1.0)
    f_changes = sign_changes(f(nodes))
    img = operator_function(f, spec)
    assert sign_changes(img(np.linspace(0, 1, 101))) <= f_changes


def test_divergent_function_raises():
    tol = TailTolerance(eps=1e-14, max_terms=4000)
    spec = OperatorSpec(2, __import__("qbd").QParam(0.5), JacobiWeight(0.0, 0.0), tol)
    with np.errstate(over="ignore"):
        with pytest.raises(ConvergenceError):
            durrmeyer_coeffs(lambda t: np.asarray(t, dtype=float) ** -1.2, spec)
