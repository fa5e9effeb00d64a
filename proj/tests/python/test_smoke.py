import itertools

import pytest

import minabro as mb


def two_feature(t_minus=-1.0, t_plus=1.0):
    model = mb.LinearModel([2.0, -2.0], 0.0, [(0.0, 1.0), (0.0, 1.0)])
    return model, mb.RejectClassifier(model, t_minus, t_plus)


def test_rejected_instance_has_single_feature_explanation():
    model, clf = two_feature()
    x = mb.Instance(model, [0.5, 0.5])
    out = mb.explain(clf, x)
    assert out.prediction.label == mb.Label.REJECT
    assert out.explanation.kind == mb.ExplanationKind.REJECTION
    assert out.explanation.indices == [0]
    assert out.explanation.certified_minimum


def test_accepted_instance_matches_brute_force():
    model, clf = two_feature()
    for values in itertools.product([0.0, 0.3, 1.0], repeat=2):
        x = mb.Instance(model, list(values))
        out = mb.explain(clf, x)
        assert len(out.explanation) == len(mb.brute_force_minimum(clf, x))
        assert mb.is_valid_explanation(clf, x, out.explanation.indices, out.explanation.kind)
        assert mb.sampled_sufficiency_check(clf, x, out.explanation.indices, out.explanation.kind, 200)


def test_baseline_never_smaller():
    model = mb.LinearModel([0.9, -0.4, 0.3, 0.1], 0.05, [(0.0, 1.0)] * 4)
    clf = mb.RejectClassifier(model, -0.2, 0.3)
    for values in itertools.product([0.0, 0.5, 1.0], repeat=4):
        x = mb.Instance(model, list(values))
        assert len(mb.subset_minimal_explanation(clf, x)) >= len(mb.explain(clf, x).explanation)


def test_calibration_on_separable_scores():
    report = mb.calibrate_thresholds([-2.0, -1.0, 1.0, 2.0], [-1, -1, 1, 1], 0.24)
    assert report.empirical_risk == 0.0
    assert report.t_minus < report.t_plus


def test_errors_map_to_python_exceptions():
    model, _ = two_feature()
    with pytest.raises(ValueError):
        mb.Instance(model, [2.0, 0.0])
    with pytest.raises(ValueError):
        mb.RejectClassifier(model, 1.0, -1.0)
    with pytest.raises(ValueError):
        mb.calibrate_thresholds([0.0], [1], 1.5)
