import unittest

from ic_engine.bits import KnownRate
from ic_engine.model.distribution import Distribution
from ic_engine.model.instance import AdversarySpec, Instance
from services.documents import LoadedInstance
from services.verification import bounds_consistency, verify_loaded

BOUNDS_CHECK = "rate brackets and leakage bounds are consistent"


def biased_four(known_rate: KnownRate | None = None) -> LoadedInstance:
    instance = Instance.from_lists(4, 2, [[4], [3], [2], [1]])
    dist = Distribution.product((1, 2, 3, 4), 2, [["1/4", "3/4"], ["1/2", "1/2"], ["1/2", "1/2"], ["1/2", "1/2"]])
    return LoadedInstance(instance, dist, AdversarySpec.build(4, [4]), name="biased_four", known_rate=known_rate)


class BoundsConsistencyTests(unittest.TestCase):
    def test_supplied_rate_inside_the_bracket(self):
        loaded = biased_four(KnownRate("3 - 0.75*log2(3)"))
        passed, detail = bounds_consistency(loaded.instance, loaded.distribution, loaded.adversary, loaded.known_rate)
        self.assertTrue(passed, detail)

    def test_without_a_supplied_rate(self):
        loaded = biased_four()
        passed, _ = bounds_consistency(loaded.instance, loaded.distribution, loaded.adversary)
        self.assertTrue(passed)

    def test_rate_above_the_zero_error_upper_fails(self):
        loaded = biased_four(KnownRate("10"))
        passed, detail = bounds_consistency(loaded.instance, loaded.distribution, loaded.adversary, loaded.known_rate)
        self.assertFalse(passed)
        self.assertIn("exceeds the zero-error upper", detail)

    def test_verify_loaded_reports_the_inconsistent_rate(self):
        summary = verify_loaded(biased_four(KnownRate("10")))
        self.assertFalse(summary.passed)
        failed = [check.name for check in summary.failures]
        self.assertEqual(failed, [f"{BOUNDS_CHECK} [biased_four]"])

    def test_verify_loaded_passes_with_the_reference_rate(self):
        summary = verify_loaded(biased_four(KnownRate("3 - 0.75*log2(3)")))
        self.assertTrue(summary.passed, [check.detail for check in summary.failures])


if __name__ == "__main__":
    unittest.main()
