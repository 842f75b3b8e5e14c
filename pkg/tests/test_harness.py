"""Generator, repair loop, soundness fuzzing, and countermodel search."""

import json
import random

import pytest

from nalkit.corpus import CORPUS_SIGNATURE, golden_corpus
from nalkit.harness import (
    GenConfig, GenerationError, RepairError, assemble_model,
    find_countermodel, generate_model, generate_models, handoff_gap_model,
    random_formula, repair_frame_conditions, soundness_check, trivial_model,
    unit_countermodel, write_corpus,
)
from nalkit.models import (
    NalModel, WorldStructure, load_model, model_to_json, validate_model,
)
from nalkit.proofs import check_derivation, load_derivation
from nalkit.semantics import EvalPoint, Evaluator, holds
from nalkit.surface import parse_formula
from nalkit.syntax import FALSE, Sequent, Signature, TRUE, well_formed

from test_models import bf_validate

SIG_R = Signature(functions={}, relations={"r": 0})


class TestGenerateModel:
    def test_deterministic_per_seed(self):
        a = generate_model(GenConfig(seed=42))
        b = generate_model(GenConfig(seed=42))
        assert model_to_json(a) == model_to_json(b)

    def test_different_seeds_differ_somewhere(self):
        blobs = {json.dumps(model_to_json(generate_model(GenConfig(seed=s))),
                            sort_keys=True)
                 for s in range(8)}
        assert len(blobs) > 1

    def test_minimal_bounds_family(self):
        for seed in range(10):
            m = generate_model(
                GenConfig(seed=seed, max_worlds=1, max_principals=1, max_domain=1)
            )
            assert len(m.worlds) == 1
            assert validate_model(m).accepted

    @pytest.mark.parametrize("seed", range(40))
    def test_generated_models_validate(self, seed):
        m = generate_model(GenConfig(seed=seed))
        assert validate_model(m).accepted

    def test_sample_count_order_is_deterministic(self):
        cfg = GenConfig(seed=5, sample_count=4)
        first = [model_to_json(m) for m in generate_models(cfg)]
        second = [model_to_json(m) for m in generate_models(cfg)]
        assert first == second

    def test_bad_bounds_rejected(self):
        with pytest.raises(ValueError):
            GenConfig(seed=1, max_worlds=0)


class TestRepair:
    def test_lone_pair_gets_density_witness(self):
        # The repair trace from the contract: a lone access pair under the
        # identity order picks up the (u, u) loop and then validates.
        m = assemble_model(
            n_worlds=2, relations={"r": {}},
            access={"bot": [("w0", "w1")]}, signature=SIG_R,
        )
        assert not validate_model(m).accepted
        repaired = repair_frame_conditions(m)
        assert ("w1", "w1") in repaired.access["bot"]
        assert validate_model(repaired).accepted

    def test_valid_model_is_fixed_point(self):
        m = unit_countermodel()
        repaired = repair_frame_conditions(m)
        assert model_to_json(repaired) == model_to_json(m)

    def test_relation_extension_restores_access_monotonicity(self):
        m = assemble_model(
            n_worlds=2,
            relations={"r": {"w0": [()]}},
            access={"bot": [("w0", "w1"), ("w1", "w1")]},
            signature=SIG_R,
        )
        assert not validate_model(m).accepted
        repaired = repair_frame_conditions(m)
        assert () in repaired.structures["w1"].relations["r"]
        assert validate_model(repaired).accepted

    def test_unfixable_candidate_is_rejected(self):
        # Domains shrink along the only available F2 witness, which pair
        # addition cannot repair.
        worlds = ("w0", "w1", "w2")
        leq = frozenset({(w, w) for w in worlds} | {("w1", "w2")})
        domains = {"w0": frozenset(["i0", "i1"]), "w1": frozenset(["i0"]),
                   "w2": frozenset(["i0"])}
        structures = {
            w: WorldStructure(
                domain=domains[w],
                eq=tuple(frozenset((d,)) for d in sorted(domains[w])),
                relations={"r": frozenset()},
                functions={},
                sub={("bot", d): "bot" for d in domains[w]},
                delta={"bot": "i0"},
                pi={d: "bot" for d in domains[w]},
            )
            for w in worlds
        }
        m = NalModel(
            worlds=worlds, leq=leq, structures=structures,
            principals=("bot",), join={("bot", "bot"): "bot"}, bottom="bot",
            access={"bot": frozenset({("w0", "w1")})},
            signature=SIG_R,
        )
        with pytest.raises(RepairError):
            repair_frame_conditions(m)


MODEL_POOL = [generate_model(GenConfig(seed=s)) for s in range(20)]


class TestSoundness:
    def test_identity_sequent_never_violated(self):
        f = parse_formula("r()", CORPUS_SIGNATURE)
        d = golden_corpus()["HYP"]
        report = soundness_check([d], MODEL_POOL)
        assert report.passed
        assert report.points_checked > 0

    def test_corpus_fuzz_clean_on_pool(self):
        proofs = list(golden_corpus().values())
        report = soundness_check(proofs, MODEL_POOL)
        assert report.passed, report.text()

    def test_harness_reports_unsound_sequent(self):
        # The general handoff inference checks in the kernel but is not
        # pointwise valid; the fuzzer must surface it, not mask it.
        from nalkit.proofs import Derivation, RuleId
        from nalkit.syntax import Says, Speaksfor, Application

        a, b = Application("a"), Application("b")
        goal = Speaksfor(a, b)
        premise_formula = Says(b, goal)
        d = Derivation(
            RuleId.HANDOFF,
            Sequent.make([premise_formula], goal),
            (Derivation(RuleId.HYP, Sequent.make([premise_formula], premise_formula)),),
        )
        sig = handoff_gap_model().signature
        assert check_derivation(d, sig).accepted
        report = soundness_check([d], [handoff_gap_model()])
        assert not report.passed
        assert report.violations[0]["world"] == "w0"
        assert "VIOLATION" in report.text()

    def test_corrupted_semantics_is_caught(self, monkeypatch):
        # Dropping the says clause must show up as violations on says
        # corpus entries whose goals are modal and hypotheses are not.
        from nalkit import semantics as sem
        from nalkit.corpus import necessitation_derivation
        from nalkit.syntax import Says

        original = sem.Evaluator._holds_uncached

        def corrupted(self, world, v, f):
            if isinstance(f, Says):
                return False
            return original(self, world, v, f)

        monkeypatch.setattr(sem.Evaluator, "_holds_uncached", corrupted)
        report = soundness_check([necessitation_derivation()], [unit_countermodel()])
        assert not report.passed

    def test_json_report_shape(self):
        report = soundness_check([golden_corpus()["TRUE-I"]], MODEL_POOL[:2])
        blob = report.to_json()
        assert blob["passed"] is True
        assert blob["proofs"] == 1 and blob["models"] == 2


class TestFindCountermodel:
    def test_false_is_falsified_immediately(self):
        result = find_countermodel(FALSE, GenConfig(seed=0, max_worlds=1,
                                                    max_principals=1, max_domain=1))
        assert result.found
        assert len(result.model.worlds) == 1
        assert validate_model(result.model).accepted

    def test_true_has_no_countermodel(self):
        result = find_countermodel(TRUE, GenConfig(seed=0, max_worlds=2,
                                                   max_principals=1, max_domain=1))
        assert not result.found
        assert result.candidates > 0

    def test_unit_formula_falsified_within_three_worlds(self):
        sig = Signature(functions={"p": 0}, relations={"r": 0})
        f = parse_formula("not r() => p() says not r()", sig)
        result = find_countermodel(
            f, GenConfig(seed=0, max_worlds=3, max_principals=2, max_domain=2)
        )
        assert result.found
        assert len(result.model.worlds) <= 3
        # The returned model validates by both routes and falsifies the
        # formula at the reported point.
        assert validate_model(result.model).accepted
        assert bf_validate(result.model)
        assert not holds(EvalPoint(result.model, result.world, {}), f)

    def test_open_formula_rejected(self):
        sig = Signature(functions={}, relations={"q": 1})
        f = parse_formula("q(x)", sig)
        with pytest.raises(ValueError):
            find_countermodel(f, GenConfig(seed=0))

    def test_budget_guard(self):
        sig = Signature(functions={"p": 0}, relations={"r": 0})
        f = parse_formula("not r() => p() says not r()", sig)
        with pytest.raises(GenerationError):
            find_countermodel(
                f, GenConfig(seed=0, max_worlds=3, max_principals=2,
                             max_domain=2),
                max_candidates=3,
            )


class TestRandomFormulas:
    def test_generated_formulas_are_well_formed(self):
        rng = random.Random(3)
        for _ in range(300):
            f = random_formula(rng, CORPUS_SIGNATURE, depth=4)
            assert well_formed(f, CORPUS_SIGNATURE).accepted

    def test_group_free_flag(self):
        from nalkit.syntax import Group

        rng = random.Random(4)
        for _ in range(200):
            f = random_formula(rng, CORPUS_SIGNATURE, depth=4, allow_groups=False)
            stack = [f]
            while stack:
                node = stack.pop()
                assert not isinstance(node, Group)
                for name in ("left", "right", "body", "pattern", "principal"):
                    child = getattr(node, name, None)
                    if child is not None and not isinstance(child, str):
                        stack.append(child)
                stack.extend(getattr(node, "args", ()))


class TestWriteCorpus:
    def test_tree_round_trips(self, tmp_path):
        write_corpus(tmp_path)
        sig_path = tmp_path / "signature.json"
        assert sig_path.exists()
        with open(sig_path, "r", encoding="utf-8") as fh:
            sig = Signature.from_json(json.load(fh))
        proofs = sorted((tmp_path / "proofs").glob("*.json"))
        assert len(proofs) == 37
        for path in proofs:
            d = load_derivation(path, sig)
            assert check_derivation(d, sig).accepted, path.name
        bad = sorted((tmp_path / "bad-proofs").glob("*.json"))
        assert len(bad) == 38  # 37 mutants plus the unit-bug fixture
        for path in bad:
            d = load_derivation(path, sig)
            assert not check_derivation(d, sig).accepted, path.name
        fuzz_models = sorted((tmp_path / "models").glob("*.json"))
        assert len(fuzz_models) >= 2
        for path in fuzz_models:
            model = load_model(path)
            assert validate_model(model).accepted, path.name
            # Fuzzing models interpret the corpus signature.
            assert model.signature == sig, path.name
        for path in sorted((tmp_path / "examples").glob("*.json")):
            assert validate_model(load_model(path)).accepted, path.name
        for path in sorted((tmp_path / "bad-models").glob("*.json")):
            assert not validate_model(load_model(path)).accepted, path.name
