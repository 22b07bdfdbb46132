import random

import pytest

from nadia.dls import parse_dls, resolve_schema
from nadia.dls.ast import DefaultDecl, Kind, RuleDecl
from nadia.fixtures import parax_mldb_source
from nadia.lexbase.model import Strength
from nadia.rules import (
    BoundArticle, KindViolation, UnknownPath, apply_defaults, compile_default,
    compile_rule, eval_expr, run_rules,
)
from nadia.values import atom, fs


@pytest.fixture(scope="module")
def parax():
    decls = parse_dls(parax_mldb_source())
    schema = resolve_schema(decls)
    rule = compile_rule(next(d for d in decls if isinstance(d, RuleDecl)), schema)
    default = compile_default(next(d for d in decls if isinstance(d, DefaultDecl)),
                              schema)
    return schema, rule, default


def french_acception(features, ident="français:acc:1"):
    return BoundArticle(kind="acception", id=ident, class_name="french-acception",
                        dictionary="french", features=features)


class TestCompile:
    def test_drv_cat_coherence(self, parax):
        _schema, rule, _d = parax
        assert rule.name == "drv-cat-coherence"
        assert rule.kind == Kind.INTEGRITY
        assert rule.strength == Strength.CRITICAL
        assert len(rule.params) == 1
        assert (rule.params[0].var, rule.params[0].class_name,
                rule.params[0].dictionary) == ("acception", "french-acception",
                                               "french")

    def test_integrity_two_articles_rejected(self, parax):
        schema, _r, _d = parax
        decls = parse_dls("""
(def-integrity bad ((a french-acception) (b french-acception) (dictionary french))
  critical t)
""")
        with pytest.raises(KindViolation):
            compile_rule(decls[0], schema)

    def test_unknown_path(self, parax):
        schema, _r, _d = parax
        decls = parse_dls("""
(def-integrity bad ((acception french-acception) (dictionary french))
  critical (empty-p (drvq acception)))
""")
        with pytest.raises(UnknownPath):
            compile_rule(decls[0], schema)

    def test_local_rule_needs_one_dictionary(self, parax):
        schema, _r, _d = parax
        decls = parse_dls("""
(def-local-coherence bad ((a french-acception) (b english-acception))
  warning t)
""")
        with pytest.raises(KindViolation):
            compile_rule(decls[0], schema)

    def test_nested_path_resolves(self, parax):
        schema, _r, _d = parax
        decls = parse_dls("""
(def-integrity deep ((acception french-acception) (dictionary french))
  warning (empty-p (deriv-kind (drvn acception))))
""")
        rule = compile_rule(decls[0], schema)
        art = french_acception(fs({"drvn": fs({"deriv-kind": atom("nlieu")})}))
        assert eval_expr(rule.body, {"acception": art}) is False


class TestEval:
    def test_vb_with_drvn_fails(self, parax):
        _s, rule, _d = parax
        art = french_acception(fs({"cat": atom("vb"),
                                   "drvn": fs({"deriv-kind": atom("nlieu")})}))
        assert eval_expr(rule.body, {"acception": art}) is False

    def test_adj_with_empty_derivations_passes(self, parax):
        _s, rule, _d = parax
        art = french_acception(fs({"cat": atom("adj")}))
        assert eval_expr(rule.body, {"acception": art}) is True

    def test_np_passes_through_catchall(self, parax):
        _s, rule, _d = parax
        art = french_acception(fs({"cat": atom("np"),
                                   "drvn": fs({"deriv-kind": atom("nlieu")})}))
        assert eval_expr(rule.body, {"acception": art}) is True

    def test_nc_with_drvv_fails(self, parax):
        _s, rule, _d = parax
        art = french_acception(fs({"cat": atom("nc"),
                                   "drvv": fs({"deriv-kind": atom("naction"),
                                               "deriv-from": atom("x")})}))
        assert eval_expr(rule.body, {"acception": art}) is False

    def test_clean_verb_passes(self, parax):
        _s, rule, _d = parax
        art = french_acception(fs({"cat": atom("vb")}))
        assert eval_expr(rule.body, {"acception": art}) is True

    def test_purity(self, parax):
        _s, rule, _d = parax
        features = fs({"cat": atom("vb"), "drva": fs({"deriv-from": atom("y")})})
        art = french_acception(features)
        first = eval_expr(rule.body, {"acception": art})
        second = eval_expr(rule.body, {"acception": art})
        assert first == second
        assert art.features == features


class TestRunRules:
    def test_changed_article_violates(self, parax):
        schema, rule, _d = parax
        art = french_acception(fs({"cat": atom("nc"),
                                   "drvv": fs({"deriv-kind": atom("naction"),
                                               "deriv-from": atom("x")})}))
        violations = run_rules([art], {art.id}, [rule], schema)
        assert len(violations) == 1
        assert violations[0].code == "drv-cat-coherence"
        assert violations[0].strength == Strength.CRITICAL
        assert violations[0].subjects == (art.id,)

    def test_unchanged_article_skipped(self, parax):
        schema, rule, _d = parax
        art = french_acception(fs({"cat": atom("nc"),
                                   "drvv": fs({"deriv-kind": atom("naction"),
                                               "deriv-from": atom("x")})}))
        assert run_rules([art], set(), [rule], schema) == []

    def test_no_rules(self, parax):
        schema, _r, _d = parax
        art = french_acception(fs({"cat": atom("vb")}))
        assert run_rules([art], {art.id}, [], schema) == []

    def test_local_rule_duplicate_features(self, parax):
        schema, _r, _d = parax
        decls = parse_dls("""
(def-local-coherence no-twin-acceptions
  ((a french-acception) (b french-acception) (dictionary french))
  warning
  (or (not (equal (parent-entry a) (parent-entry b)))
      (not (equal a b))))
""")
        rule = compile_rule(decls[0], schema)
        same = fs({"cat": atom("vb")})
        arts = [
            BoundArticle(kind="acception", id=f"français:acc:{i}",
                         class_name="french-acception", dictionary="french",
                         features=same, entry_id="français:entry:1")
            for i in (1, 2)
        ]
        violations = run_rules(arts, {"français:acc:1"}, [rule], schema)
        # brute-force pairwise comparison over the two acceptions
        expected = [(a, b) for a in arts for b in arts
                    if a.id != b.id and a.entry_id == b.entry_id
                    and a.features == b.features]
        assert expected
        assert len(violations) == 1
        assert set(violations[0].subjects) == {"français:acc:1", "français:acc:2"}

    def test_local_rule_distinct_features_clean(self, parax):
        schema, _r, _d = parax
        decls = parse_dls("""
(def-local-coherence no-twin-acceptions
  ((a french-acception) (b french-acception) (dictionary french))
  warning
  (or (not (equal (parent-entry a) (parent-entry b)))
      (not (equal a b))))
""")
        rule = compile_rule(decls[0], schema)
        arts = [
            BoundArticle(kind="acception", id="français:acc:1",
                         class_name="french-acception", dictionary="french",
                         features=fs({"cat": atom("vb")}),
                         entry_id="français:entry:1"),
            BoundArticle(kind="acception", id="français:acc:2",
                         class_name="french-acception", dictionary="french",
                         features=fs({"cat": atom("nc")}),
                         entry_id="français:entry:1"),
        ]
        assert run_rules(arts, {"français:acc:1"}, [rule], schema) == []


class TestDefaults:
    def test_fires_on_empty(self, parax):
        schema, _r, default = parax
        out, applied = apply_defaults(fs({"cat": atom("vb")}), "french-acception",
                                      "french", [default], schema)
        assert out.get("aux") == atom("avoir")
        assert applied == [("aux", atom("avoir"))]

    def test_never_overwrites(self, parax):
        schema, _r, default = parax
        given = fs({"cat": atom("vb"), "aux": atom("être")})
        out, applied = apply_defaults(given, "french-acception", "french",
                                      [default], schema)
        assert out == given and applied == []

    def test_idempotent(self, parax):
        schema, _r, default = parax
        once, _ = apply_defaults(fs({"cat": atom("vb")}), "french-acception",
                                 "french", [default], schema)
        twice, applied = apply_defaults(once, "french-acception", "french",
                                        [default], schema)
        assert twice == once and applied == []

    def test_interactive_proposes_without_mutating(self, parax):
        schema, _r, default = parax
        given = fs({"cat": atom("vb")})
        out, proposals = apply_defaults(given, "french-acception", "french",
                                        [default], schema, mode="interactive")
        assert out == given
        assert proposals == [("aux", atom("avoir"))]

    def test_guard_false_no_fire(self, parax):
        schema, _r, default = parax
        out, applied = apply_defaults(fs({"cat": atom("nc")}), "french-acception",
                                      "french", [default], schema)
        assert applied == [] and out.get("aux") is None

    def test_wrong_dictionary_skipped(self, parax):
        schema, _r, default = parax
        out, applied = apply_defaults(fs({"cat": atom("vb")}), "french-acception",
                                      "german", [default], schema)
        assert applied == []

    def test_assignment_constant_must_typecheck(self, parax):
        schema, _r, _d = parax
        decls = parse_dls("""
(def-default bad ((acception french-acception) (dictionary french))
  t
  (set (aux acception) 'hammer))
""")
        with pytest.raises(Exception, match="does not fit"):
            compile_default(decls[0], schema)

    def test_randomized_idempotence_and_monotonicity(self, parax):
        schema, _r, _d = parax
        rng = random.Random(5)
        cats = ["nc", "np", "vb", "adj", "card"]
        auxes = ["être", "avoir"]
        rules = []
        for i, cat in enumerate(cats):
            decls = parse_dls(f"""
(def-default d{i} ((acception french-acception) (dictionary french))
  (equal (cat acception) '{cat})
  (set (aux acception) '{rng.choice(auxes)}))
""")
            rules.append(compile_default(decls[0], schema))
        for _ in range(100):
            features = fs({"cat": atom(rng.choice(cats))})
            if rng.random() < 0.4:
                features = features.with_feature("aux", atom(rng.choice(auxes)))
            chosen = rng.sample(rules, rng.randint(0, len(rules)))
            once, _ = apply_defaults(features, "french-acception", "french",
                                     chosen, schema)
            twice, applied = apply_defaults(once, "french-acception", "french",
                                            chosen, schema)
            assert twice == once and applied == []
            for name, value in features.features:
                assert once.get(name) == value  # monotone: present stays
