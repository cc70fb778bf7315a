from itertools import islice

from polyaurns.laws import LawReport, trial_generators, trial_stream


def test_stream_extends_fixed_generators():
    fixed = [rng.integers(1 << 30) for rng in trial_generators(11, 5)]
    streamed = [rng.integers(1 << 30) for rng in islice(trial_stream(11), 7)]
    assert streamed[:5] == fixed
    assert len(set(streamed)) == 7


def test_record_keeps_first_failure():
    report = LawReport.for_laws(('assoc',), 4)
    report.record('assoc', True, 0, ('x',))
    report.record('assoc', False, 1, ('y',))
    report.record('assoc', False, 2, ('z',))
    assert not report.passed
    assert report.failures() == ['assoc']
    assert report.laws['assoc'].trial == 1
    assert report.laws['assoc'].counterexample == ('y',)
    assert report.qualifying == {}
