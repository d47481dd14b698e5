"""Two-layer transparency extraction.

Layer one flags segments that disclose a transfer intention; layer two runs
only on flagged segments and extracts target countries (gazetteer), the
adequacy claim (second linear classifier) and safeguard/copy elements
(proximity rules).  Representative and privacy-shield rules run on every
segment.  Policy-level annotations OR the segment flags and union countries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

from .classifier import TextClassifier
from .countries import (
    EU_MEMBERS_2020,
    CountryDictionary,
    detect_target_countries,
    whitespace_tokens,
)
from .rules import ProximityRule, load_rules, matched_elements

GATED_ELEMENTS = ("scc", "bcr", "explicit_consent", "copy_means")
UNGATED_ELEMENTS = ("representative", "privacy_shield")


def default_rules() -> list[ProximityRule]:
    with resources.as_file(
        resources.files("transferaudit.data").joinpath("rules.tsv")
    ) as path:
        return load_rules(path)


@dataclass(frozen=True)
class SegmentAnnotation:
    intention: bool = False
    countries: frozenset[str] = frozenset()
    adequacy: bool = False
    scc: bool = False
    bcr: bool = False
    explicit_consent: bool = False
    copy_means: bool = False
    representative: bool = False
    privacy_shield: bool = False


@dataclass
class PolicyAnnotation:
    intention: bool = False
    countries: frozenset[str] = frozenset()
    adequacy: bool = False
    scc: bool = False
    bcr: bool = False
    explicit_consent: bool = False
    copy_means: bool = False
    representative: bool = False
    privacy_shield: bool = False
    segments: list[SegmentAnnotation] = field(default_factory=list)


def annotate_segment(segment_text: str, intention_model: TextClassifier,
                     adequacy_model: TextClassifier | None,
                     rules: list[ProximityRule],
                     dictionary: CountryDictionary,
                     eu_codes: frozenset[str] = EU_MEMBERS_2020) -> SegmentAnnotation:
    """Annotate one segment; layer-two elements stay off unless gated in."""
    elements = matched_elements(rules, segment_text)
    intention = bool(intention_model.predict_text(segment_text))
    countries: frozenset[str] = frozenset()
    adequacy = scc = bcr = explicit_consent = copy_means = False
    if intention:
        countries = frozenset(
            detect_target_countries(whitespace_tokens(segment_text), dictionary, eu_codes)
        )
        if adequacy_model is not None:
            adequacy = bool(adequacy_model.predict_text(segment_text))
        scc = "scc" in elements
        bcr = "bcr" in elements
        explicit_consent = "explicit_consent" in elements
        copy_means = "copy_means" in elements
    return SegmentAnnotation(
        intention=intention,
        countries=countries,
        adequacy=adequacy,
        scc=scc,
        bcr=bcr,
        explicit_consent=explicit_consent,
        copy_means=copy_means,
        representative="representative" in elements,
        privacy_shield="privacy_shield" in elements,
    )


def annotate_policy(segment_annotations: list[SegmentAnnotation]) -> PolicyAnnotation:
    """Element-wise OR over segments; a policy discloses what any segment does."""
    policy = PolicyAnnotation(segments=list(segment_annotations))
    countries: set[str] = set()
    for ann in segment_annotations:
        policy.intention |= ann.intention
        policy.adequacy |= ann.adequacy
        policy.scc |= ann.scc
        policy.bcr |= ann.bcr
        policy.explicit_consent |= ann.explicit_consent
        policy.copy_means |= ann.copy_means
        policy.representative |= ann.representative
        policy.privacy_shield |= ann.privacy_shield
        countries |= ann.countries
    policy.countries = frozenset(countries)
    return policy


@dataclass
class SegmentAnnotator:
    """Bundles the models and data files needed to annotate policies."""

    intention_model: TextClassifier
    adequacy_model: TextClassifier | None
    rules: list[ProximityRule]
    dictionary: CountryDictionary
    eu_codes: frozenset[str] = EU_MEMBERS_2020

    def annotate_segment(self, segment_text: str) -> SegmentAnnotation:
        return annotate_segment(segment_text, self.intention_model,
                                self.adequacy_model, self.rules,
                                self.dictionary, self.eu_codes)

    def annotate_policy(self, segment_texts: list[str]) -> PolicyAnnotation:
        return annotate_policy([self.annotate_segment(t) for t in segment_texts])
