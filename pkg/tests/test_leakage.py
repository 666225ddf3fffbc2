import unittest
from fractions import Fraction

from ic_engine.bits import Bits
from ic_engine.coding.codes import DeterministicCode, constant_code, identity_code, refine_code
from ic_engine.errors import InstanceValidationError, InvariantViolationError
from ic_engine.leakage.guessing import (
    LeakageReport,
    leakage,
    posterior_guesses,
    ps_posterior,
    ps_prior,
    resolve_capability,
    top_c_mass,
)
from ic_engine.model.distribution import Distribution
from ic_engine.model.instance import AdversarySpec, Instance


def correlated_pair() -> tuple[Instance, Distribution]:
    instance = Instance.from_lists(2, 2, [[2], [1]])
    dist = Distribution.joint((1, 2), 2, {"00": "1/10", "01": "1/5", "10": "3/10", "11": "2/5"})
    return instance, dist


def xor_code(instance: Instance) -> DeterministicCode:
    return DeterministicCode.from_function(instance.tuple_index(), lambda x: 1 + (x[0] ^ x[1]))


class GuessingTests(unittest.TestCase):
    def test_top_c_mass(self):
        values = [Fraction(1, 10), Fraction(2, 5), Fraction(3, 10), Fraction(1, 5)]
        self.assertEqual(top_c_mass(values, 1), Fraction(2, 5))
        self.assertEqual(top_c_mass(values, 2), Fraction(7, 10))
        self.assertEqual(top_c_mass(values, 9), 1)
        with self.assertRaises(InstanceValidationError):
            top_c_mass(values, 0)

    def test_prior_and_posterior_for_xor(self):
        instance, dist = correlated_pair()
        adversary = AdversarySpec.build(2)
        self.assertEqual(ps_prior(dist, adversary, 1), Fraction(2, 5))
        self.assertEqual(ps_posterior(xor_code(instance), dist, adversary), Fraction(7, 10))

    def test_guesses_per_codeword(self):
        instance, dist = correlated_pair()
        guesses = posterior_guesses(xor_code(instance), dist, AdversarySpec.build(2))
        self.assertEqual(guesses, {(1, ()): ((1, 1),), (2, ()): ((1, 0),)})

    def test_known_message_changes_the_prior(self):
        _, dist = correlated_pair()
        adversary = AdversarySpec.build(2, [2])
        # Σ_{x2} max_{x1} P(x1, x2) = 3/10 + 2/5
        self.assertEqual(ps_prior(dist, adversary, 1), Fraction(7, 10))

    def test_prior_on_sequences_is_the_product(self):
        _, dist = correlated_pair()
        adversary = AdversarySpec.build(2)
        self.assertEqual(ps_prior(dist, adversary, 2), Fraction(4, 25))


class LeakageTests(unittest.TestCase):
    def test_xor_leakage_is_exact(self):
        instance, dist = correlated_pair()
        report = leakage(xor_code(instance), instance, dist, AdversarySpec.build(2), code_label="xor")
        self.assertEqual(report.ratio, Fraction(7, 4))
        self.assertEqual(report.bits, Bits.log2(Fraction(7, 4)))
        self.assertAlmostEqual(report.bits.value, 0.807354922057604, places=12)
        self.assertEqual(report.notions, ("min-entropy leakage",))
        payload = report.to_payload()
        self.assertEqual(payload["ps_prior"], "2/5")
        self.assertEqual(payload["ps_posterior"], "7/10")
        self.assertEqual(payload["leakage"]["exact"], "log2(7/4)")

    def test_identity_code_reveals_everything(self):
        instance, dist = correlated_pair()
        report = leakage(identity_code(instance), instance, dist, AdversarySpec.build(2))
        self.assertEqual(report.ps_posterior, 1)
        self.assertEqual(report.bits, Bits.log2(Fraction(5, 2)))

    def test_constant_code_leaks_nothing(self):
        instance, dist = correlated_pair()
        report = leakage(constant_code(instance), instance, dist, AdversarySpec.build(2))
        self.assertEqual(report.bits, Bits.zero())

    def test_uniform_leakage_is_also_maximal_leakage(self):
        instance = Instance.from_lists(2, 2, [[2], [1]])
        dist = Distribution.uniform((1, 2), 2)
        report = leakage(xor_code(instance), instance, dist, AdversarySpec.build(2))
        self.assertEqual(report.bits, Bits.constant(1))
        self.assertEqual(report.notions, ("min-entropy leakage", "maximal leakage"))

    def test_refinement_never_lowers_the_posterior(self):
        instance, dist = correlated_pair()
        adversary = AdversarySpec.build(2)
        coarse = constant_code(instance)
        finer = refine_code(coarse, 1)
        self.assertGreaterEqual(ps_posterior(finer, dist, adversary), ps_posterior(coarse, dist, adversary))

    def test_capability_above_alpha_is_clamped(self):
        instance, dist = correlated_pair()
        adversary = AdversarySpec.build(2, capability=3)
        with self.assertLogs("ic_engine.model.instance", level="WARNING"):
            c, alpha = resolve_capability(instance, adversary, 1)
        self.assertEqual((c, alpha), (2, 2))
        with self.assertRaises(InvariantViolationError):
            leakage(xor_code(instance), instance, dist, adversary, strict=True)

    def test_two_guesses(self):
        instance, dist = correlated_pair()
        adversary = AdversarySpec.build(2, capability=2)
        report = leakage(xor_code(instance), instance, dist, adversary)
        # two guesses cover each XOR class completely
        self.assertEqual(report.ps_posterior, 1)
        self.assertEqual(report.ps_prior, Fraction(7, 10))
        self.assertEqual(report.notions, ())

    def test_report_checks_its_ordering(self):
        with self.assertRaises(InvariantViolationError):
            LeakageReport(Fraction(1, 2), Fraction(1, 4), 1, 1, 2)

    def test_mismatched_adversary(self):
        instance, dist = correlated_pair()
        with self.assertRaises(InstanceValidationError):
            leakage(xor_code(instance), instance, dist, AdversarySpec.build(3))

    def test_sequence_code_uses_the_product_distribution(self):
        instance, dist = correlated_pair()
        code = identity_code(instance, None, 2)
        report = leakage(code, instance, dist, AdversarySpec.build(2))
        self.assertEqual(report.t, 2)
        self.assertEqual(report.ps_prior, Fraction(4, 25))
        self.assertEqual(report.per_symbol, Bits.log2(Fraction(25, 4), Fraction(1, 2)))


if __name__ == "__main__":
    unittest.main()
