import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import main
from cli import states, suites
from cli.config import JobConfig, load_config
from cli.expr import BinOp, Call, Neg, Num, Pow, Var, check_expr, expression_cochain, groupoid_scope, parse_expr, to_source
from cli.report import CheckResult, Report, load_report
from cli.runner import run_suite, thread_count
from groupworld.groupoids import dual_action, lie_group
from groupworld.groups import catalog_group, character_rep
from tensorcore.errors import ConfigError, ExprNameError, ExprSyntaxError
from vanest.operators import van_est


@pytest.fixture
def rng():
    return np.random.default_rng(23)


def job(**overrides):
    data = {"version": 1, "seed": 3, "group": "su2"}
    data.update(overrides)
    return data


def write_json(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


class TestParser:
    def test_valid_expression(self):
        ast = parse_expr("sin(g1[0][1]) * xi[0]")
        assert ast == BinOp("*", Call("sin", Var("g1", (0, 1))), Var("xi", (0,)))

    def test_precedence_and_associativity(self):
        assert parse_expr("1 - 2 - 3") == BinOp("-", BinOp("-", Num(1), Num(2)), Num(3))
        assert parse_expr("1 + 2 * 3^2") == BinOp("+", Num(1), BinOp("*", Num(2), Pow(Num(3), 2)))
        assert parse_expr("-x^2") == Neg(Pow(Var("x"), 2))
        assert parse_expr("(1 + 2) / 4") == BinOp("/", BinOp("+", Num(1), Num(2)), Num(4))

    def test_syntax_error_at_end_of_input(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse_expr("g1[0][0] +")
        assert (info.value.line, info.value.column) == (1, 11)
        assert "identifier" in info.value.expected

    def test_error_position_on_a_later_line(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse_expr("1 +\n  * 2")
        assert (info.value.line, info.value.column) == (2, 3)

    @pytest.mark.parametrize("src", ["", "(1", "g1[x]", "1 $ 2", "2^-1", "2^99", "sin(1", "1 2", "1e999"])
    def test_rejects(self, src):
        with pytest.raises(ExprSyntaxError):
            parse_expr(src)

    def test_deep_nesting_is_an_error(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("(" * 500 + "1" + ")" * 500)

    @pytest.mark.parametrize("src", [
        "trace(g1 * g2) - trace(g2 * g1)",
        "-(a - b) * -c",
        "a - (b - c)",
        "a / (b * c)",
        "(-a)^3 + det(g1)^2",
        "cos(t1[0])^2 + 0.5 * 1e-05",
    ])
    def test_print_is_a_fixed_point(self, src):
        once = to_source(parse_expr(src))
        assert to_source(parse_expr(once)) == once
        assert parse_expr(once) == parse_expr(src)

    @settings(max_examples=300, deadline=None)
    @given(st.text())
    def test_fuzz_text(self, src):
        try:
            ast = parse_expr(src)
        except (ExprSyntaxError, ExprNameError):
            return
        assert parse_expr(to_source(ast)) == ast

    @settings(max_examples=200, deadline=None)
    @given(st.binary(max_size=64))
    def test_fuzz_bytes(self, data):
        try:
            parse_expr(data.decode("latin-1"))
        except (ExprSyntaxError, ExprNameError):
            pass


leaves = st.one_of(
    st.integers(min_value=0, max_value=10 ** 6).map(Num),
    st.sampled_from([0.5, 1.25, 1e-05, 2.5e+20]).map(Num),
    st.builds(Var, st.sampled_from(["g1", "g2", "xi", "eta", "t1"]),
              st.lists(st.integers(0, 3), max_size=2).map(tuple)),
)
trees = st.recursive(leaves, lambda inner: st.one_of(
    st.builds(BinOp, st.sampled_from(["+", "-", "*", "/"]), inner, inner),
    st.builds(Neg, inner),
    st.builds(Pow, inner, st.integers(0, 16)),
    st.builds(Call, st.sampled_from(["sin", "cos", "exp", "trace", "det"]), inner),
), max_leaves=12)


class TestPrinter:
    @settings(max_examples=200, deadline=None)
    @given(trees)
    def test_reparse_gives_the_same_tree(self, ast):
        assert parse_expr(to_source(ast)) == ast


class TestTypes:
    def scope(self, name="su2", p=2):
        return groupoid_scope(lie_group(catalog_group(name)), p)

    def test_shapes(self):
        scope = self.scope()
        assert check_expr(parse_expr("g1 * g2"), scope) == (4, 4)
        assert check_expr(parse_expr("g1[0]"), scope) == (4,)
        assert check_expr(parse_expr("trace(g1 * g2) + det(g2)"), scope) == ()

    @pytest.mark.parametrize("src", ["foo + 1", "g3[0][0]", "g0[0][0]", "g1[4][0]", "xi[0]", "t1[0]", "bar(1)"])
    def test_unknown_names_and_indices(self, src):
        with pytest.raises(ExprNameError):
            check_expr(parse_expr(src), self.scope())

    @pytest.mark.parametrize("src", ["g1 + 1", "sin(g1)", "trace(1)", "g1[0][0][0]", "1 / g1", "g1[0] * g1[1]",
                                     "g1[0]^2"])
    def test_type_errors(self, src):
        with pytest.raises(ExprSyntaxError):
            check_expr(parse_expr(src), self.scope())

    def test_cochains_must_be_scalar(self):
        with pytest.raises(ExprSyntaxError):
            expression_cochain("g1 * g2", lie_group(catalog_group("su2")), 2)


class TestExpressionCochains:
    def test_trace_commutativity(self, rng):
        lg = lie_group(catalog_group("su2"))
        f = expression_cochain("trace(g1*g2) - trace(g2*g1)", lg, 2)
        for _ in range(5):
            assert float(f(lg.random_point(rng, 2))[0]) == pytest.approx(0.0, abs=1e-12)

    def test_matrix_entries_and_det(self, rng):
        lg = lie_group(catalog_group("so3"))
        f = expression_cochain("det(g1) + g1[0][1]", lg, 1)
        pt = lg.random_point(rng, 1)
        g = np.asarray(pt.arrows[0].g, dtype=float)
        assert float(f(pt)[0]) == pytest.approx(np.linalg.det(g) + g[0, 1])

    def test_angle_chart_on_the_circle(self, rng):
        lg = lie_group(catalog_group("torus:1"))
        f = expression_cochain("sin(t1[0])", lg, 1)
        pt = lg.random_point(rng, 1)
        assert float(f(pt)[0]) == pytest.approx(float(pt.arrows[0].g[1, 0]))
        assert van_est(f).get((0,))[0] == pytest.approx(1.0)

    def test_base_coordinates(self, rng):
        group = catalog_group("torus:1")
        groupoid = dual_action(character_rep(group, [1]))
        f = expression_cochain("xi[0] * g1[1][0] + xi[1]^2", groupoid, 1)
        pt = groupoid.random_point(rng, 1)
        x, g = pt.base, pt.arrows[0].g
        assert float(f(pt)[0]) == pytest.approx(float(x[0] * g[1, 0] + x[1] ** 2))


class TestConfig:
    def test_minimal(self):
        cfg = JobConfig.from_dict(job())
        assert cfg.suites == ["ce"]
        assert cfg.algebra_rep.dim == 1
        assert cfg.tol("chain") == 1e-8

    def test_families_expand_to_expressions(self):
        cfg = JobConfig.from_dict(job(cochains=[{"family": "offdiag", "degree": 2}]))
        assert cfg.cochains[0].expr == "g1[1][0] * g2[1][0]"
        assert cfg.cochain(cfg.cochains[0]).p == 2

    @pytest.mark.parametrize("data", [
        {"version": 1, "group": "su2"},
        job(group="su3"),
        job(version=2),
        job(suites=["ce", "ce"]),
        job(suites=["nope"]),
        job(extra=1),
        job(cochains=[{"degree": 1}]),
        job(cochains=[{"degree": 1, "expr": "1", "family": "offdiag"}]),
        job(representation={"kind": "character", "weights": [1]}),
        job(group="torus:2", representation={"kind": "character", "weights": [1]}),
        job(group="torus:1", representation={"kind": "character"}),
        job(representation={"kind": "matrices", "matrices": [[[0, 1], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 0]]]}),
        job(representation={"kind": "matrices", "matrices": [[["x"]], [["0"]], [["0"]]]}),
        job(cochains=[{"degree": 9, "expr": "1"}]),
    ])
    def test_invalid(self, data):
        with pytest.raises(ConfigError):
            JobConfig.from_dict(data)

    def test_expression_errors_pass_through(self):
        with pytest.raises(ExprSyntaxError):
            JobConfig.from_dict(job(cochains=[{"degree": 1, "expr": "g1[0][0] +"}]))
        with pytest.raises(ExprNameError):
            JobConfig.from_dict(job(cochains=[{"degree": 1, "expr": "g2[0][0]"}]))

    def test_exact_matrices(self):
        # sl2 in its defining representation, h e f, entries as strings and ints
        data = job(group="sl2", representation={"kind": "matrices", "matrices": [
            [["1", "0"], ["0", "-1"]], [[0, 1], [0, 0]], [["0", "0"], ["2/2", 0]]]})
        cfg = JobConfig.from_dict(data)
        assert cfg.algebra_rep.exact
        assert cfg.algebra_rep.dim == 2

    def test_streams_are_per_check(self):
        cfg = JobConfig.from_dict(job())
        assert cfg.rng("a").integers(1 << 30) == cfg.rng("a").integers(1 << 30)
        assert cfg.rng("a").integers(1 << 30) != cfg.rng("b").integers(1 << 30)

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{\"seed\": 1,", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_config(str(path))
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "missing.json"))


class TestReport:
    def make(self):
        return Report({"group": "su2"}, [
            CheckResult.measured("weil", "b", 1e-3, 1e-6, 0.5),
            CheckResult.measured("ce", "a", 0.0, 0.0, 0.25, betti=[1, 0, 0, 1]),
            CheckResult.error("ce", "c", "boom"),
        ], "2026-01-01T00:00:00+00:00")

    def test_statuses(self):
        report = self.make()
        assert [c.status for c in report.sorted_checks()] == [states.PASSED, states.ERROR, states.FAILED]
        assert not report.passed
        assert report.exit_code() == 1
        assert report.summary()[states.PASSED] == 1

    def test_stable_json_drops_time(self):
        data = json.loads(self.make().to_json(stable=True))
        assert "generated_at" not in data
        assert all("seconds" not in c for c in data["checks"])
        assert data["checks"][1]["residual"] == "nan"
        full = json.loads(self.make().to_json())
        assert full["generated_at"] == "2026-01-01T00:00:00+00:00"

    def test_csv(self):
        lines = self.make().to_csv().splitlines()
        assert lines[0] == "suite,name,residual,tolerance,status,seconds"
        assert lines[1].startswith("ce,a,0.0,0.0,passed")

    def test_reload(self, tmp_path):
        path = tmp_path / "report.json"
        path.write_text(self.make().to_json(), encoding="utf-8")
        again = load_report(str(path))
        assert again.to_json() == self.make().to_json()


def statuses(report):
    return {c.name: c.status for c in report.checks}


class TestSuites:
    def test_ce_on_su2(self):
        report = run_suite(JobConfig.from_dict(job(suites=["ce"], max_sym=1)), threads=1)
        betti = {c.name: c.details.get("betti") for c in report.checks}
        assert betti["betti:S^0"] == [1, 0, 0, 1]
        assert report.passed

    def test_ce_on_heis3(self):
        report = run_suite(JobConfig.from_dict(job(group="heis3", suites=["ce"], max_sym=0)), threads=1)
        assert {c.name: c.details.get("betti") for c in report.checks}["betti:S^0"] == [1, 2, 2, 1]

    def test_vanest_on_the_torus(self):
        cfg = JobConfig.from_dict(job(group="torus:2", suites=["vanest"], cochains=[
            {"name": "a", "degree": 1, "expr": "sin(t1[0]) + g1[3][2]"},
            {"name": "b", "degree": 1, "expr": "g1[1][0] * (1 + g1[2][2])"},
            {"family": "offdiag", "degree": 2},
        ]))
        report = run_suite(cfg, threads=1)
        assert set(statuses(report)) == {"chain:a", "chain:b", "chain:offdiag", "cup:a*b"}
        assert report.passed

    def test_homogeneous_projection_on_an_action(self):
        cfg = JobConfig.from_dict(job(group="torus:1", groupoid="dual", suites=["vanest"],
                                      representation={"kind": "character", "weights": [1]},
                                      cochains=[{"name": "f", "degree": 1, "expr": "(1 + xi[0] + xi[1]^2) * g1[1][0]"}]))
        report = run_suite(cfg, threads=1)
        assert len(report.checks) == 3
        assert report.passed

    def test_kappa_on_the_circle(self):
        cfg = JobConfig.from_dict(job(group="torus:1", ruth="torus1-gauge", suites=["kappa"], resolution=64,
                                      samples=2))
        report = run_suite(cfg, threads=1)
        identity = [c for c in report.checks if c.name.startswith("homotopy-identity")]
        assert identity and all(c.residual < 1e-12 for c in identity)
        assert report.passed

    def test_homological(self):
        report = run_suite(JobConfig.from_dict(job(suites=["homological"], lemma_cases=20)), threads=1)
        assert [c.residual for c in report.checks] == [0.0]

    def test_parallel_runs_are_deterministic(self):
        data = job(suites=["ce", "homological", "group"], lemma_cases=5, samples=2, max_sym=0,
                   cochains=[{"family": "shifted", "degree": 1}])
        one = run_suite(JobConfig.from_dict(data), threads=1, config_echo=data)
        three = run_suite(JobConfig.from_dict(data), threads=3, config_echo=data)
        assert one.to_json(stable=True) == three.to_json(stable=True)

    def test_crashing_suite_is_reported(self, monkeypatch):
        def crash(cfg):
            raise RuntimeError("worker down")

        monkeypatch.setitem(suites.SUITE_FUNCTIONS, "ce", crash)
        report = run_suite(JobConfig.from_dict(job()), threads=1)
        assert [(c.suite, c.status) for c in report.checks] == [("ce", states.ERROR)]
        assert "worker down" in report.checks[0].details["message"]

    def test_thread_count(self):
        assert thread_count({}) == 1
        assert thread_count({"VANEST_THREADS": "4"}) == 4
        with pytest.raises(ConfigError):
            thread_count({"VANEST_THREADS": "0"})
        with pytest.raises(ConfigError):
            thread_count({"VANEST_THREADS": "many"})


class TestMain:
    def test_cohomology_command(self, tmp_path, capsys):
        config = write_json(tmp_path / "job.json", job(max_sym=0))
        out = tmp_path / "report.json"
        csv_out = tmp_path / "report.csv"
        assert main.main(["cohomology", config, "-o", str(out), "--csv", str(csv_out)]) == 0
        data = json.loads(out.read_text(encoding="utf-8"))
        assert data["passed"] and data["summary"]["passed"] == 2
        assert csv_out.read_text(encoding="utf-8").startswith("suite,name")

        assert main.main(["report", str(out), "--format", "csv"]) == 0
        assert capsys.readouterr().out.splitlines()[0] == "suite,name,residual,tolerance,status,seconds"

    def test_config_errors_exit_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("not json", encoding="utf-8")
        assert main.main(["check", str(bad)]) == 2
        assert "ConfigError" in capsys.readouterr().err
        expr = write_json(tmp_path / "expr.json", job(cochains=[{"degree": 1, "expr": "g1[0][0] +"}]))
        assert main.main(["check", expr]) == 2

    def test_failures_exit_1(self, tmp_path, monkeypatch):
        monkeypatch.setitem(suites.SUITE_FUNCTIONS, "ce",
                            lambda cfg: [CheckResult.measured("ce", "forced", 1.0, 0.0)])
        config = write_json(tmp_path / "job.json", job())
        assert main.main(["check", config, "-o", str(tmp_path / "out.json")]) == 1

    def test_stable_output_is_reproducible(self, tmp_path):
        config = write_json(tmp_path / "job.json", job(suites=["homological"], lemma_cases=5))
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main.main(["check", config, "--stable", "-o", str(a)])
        main.main(["check", config, "--stable", "-o", str(b)])
        assert a.read_bytes() == b.read_bytes()
