"""Transfer typing and per-transfer disclosure verdicts.

Each (event, destination country) pair gets exactly one transfer type and
one verdict.  Evaluation order is normative: intra-EU legs are out of scope;
first-party transfers need only the EU-representative disclosure; for
third-party transfers an undisclosed intention is an omission, a disclosed
country set that misses the actual destination is an inconsistency, and
anything else with gaps is ambiguous.  Mismatch outranks incompleteness.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass, field
from importlib import resources

from .errors import ParseError
from .flows import FIRST_PARTY, TransferEvent
from .transparency import PolicyAnnotation

INTRA_EU = "intra_eu"
T1_FIRST_PARTY = "t1_first_party_non_eu"
T2_ADEQUACY = "t2_adequacy"
T3_NO_ADEQUACY = "t3_no_adequacy"

FD = "FD"
AD = "AD"
ID = "ID"
OD = "OD"
NOT_APPLICABLE = "NA"

COMPLIANT = "compliant"
POTENTIALLY_NON_COMPLIANT = "potentially_non_compliant"
NO_TRANSFER = "no_personal_data_transfer"


@dataclass(frozen=True)
class FrameworkRule:
    name: str
    alias_country: str
    invalid_from: datetime.date


@dataclass(frozen=True)
class JurisdictionConfig:
    eu_set: frozenset[str]
    adequacy_set: frozenset[str]
    invalidated_frameworks: tuple[FrameworkRule, ...]
    assessment_date: datetime.date

    def __post_init__(self):
        overlap = self.eu_set & self.adequacy_set
        if overlap:
            raise ValueError(f"countries cannot be both EU and adequacy: {sorted(overlap)}")

    def framework_valid(self, name: str) -> bool:
        for fw in self.invalidated_frameworks:
            if fw.name == name:
                return self.assessment_date < fw.invalid_from
        return True


def load_jurisdiction(path=None) -> JurisdictionConfig:
    """Sectioned line format: [eu], [adequacy], [frameworks], [assessment_date]."""
    if path is None:
        text = resources.files("transferaudit.data").joinpath(
            "jurisdiction_2020_07.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    sections: dict[str, list[str]] = {"eu": [], "adequacy": [], "frameworks": [],
                                      "assessment_date": []}
    current: list[str] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1]
            if name not in sections:
                raise ParseError(f"unknown section [{name}]", lineno)
            current = sections[name]
            continue
        if current is None:
            raise ParseError("content before any section header", lineno)
        current.append(line)
    frameworks = []
    for entry in sections["frameworks"]:
        parts = entry.split("\t")
        if len(parts) != 3:
            raise ParseError(f"bad framework line {entry!r}")
        frameworks.append(FrameworkRule(parts[0], parts[1],
                                        datetime.date.fromisoformat(parts[2])))
    if len(sections["assessment_date"]) != 1:
        raise ParseError("need exactly one assessment_date")
    return JurisdictionConfig(
        eu_set=frozenset(sections["eu"]),
        adequacy_set=frozenset(sections["adequacy"]),
        invalidated_frameworks=tuple(frameworks),
        assessment_date=datetime.date.fromisoformat(sections["assessment_date"][0]),
    )


def classify_transfer_type(event: TransferEvent, country: str,
                           juris: JurisdictionConfig) -> str:
    """One transfer type per (event, destination country)."""
    if country in juris.eu_set:
        return INTRA_EU
    if event.recipient.kind == FIRST_PARTY:
        return T1_FIRST_PARTY
    if country in juris.adequacy_set:
        return T2_ADEQUACY
    return T3_NO_ADEQUACY


@dataclass(frozen=True)
class Verdict:
    verdict_class: str
    app_id: str
    recipient_domain: str
    country: str
    transfer_type: str
    missing_elements: frozenset[str] = frozenset()
    country_mismatch: tuple[str, frozenset[str]] | None = None
    invalid_safeguard_reason: str | None = None
    recipient_owner: str | None = None
    recipient_hq: str | None = None


def _safeguard_validity(policy: PolicyAnnotation, event: TransferEvent,
                        juris: JurisdictionConfig) -> tuple[bool, str | None]:
    if policy.scc or policy.bcr:
        return True, None
    reasons = []
    if policy.explicit_consent:
        if not event.any_idle_flow:
            return True, None
        reasons.append("explicit consent nullified by idle-stage transfer")
    if policy.privacy_shield:
        if juris.framework_valid("privacy_shield"):
            return True, None
        reasons.append("privacy shield framework invalidated")
    return False, "; ".join(reasons) or None


def judge_transfer(ttype: str, event: TransferEvent, country: str,
                   policy: PolicyAnnotation, juris: JurisdictionConfig) -> Verdict:
    """One verdict per typed (event, country) judgment."""
    base = dict(app_id=event.app_id, recipient_domain=event.recipient_domain,
                country=country, transfer_type=ttype,
                recipient_owner=event.recipient.owner_name,
                recipient_hq=event.recipient.hq_country)
    if ttype == INTRA_EU:
        return Verdict(NOT_APPLICABLE, **base)
    if ttype == T1_FIRST_PARTY:
        if policy.representative:
            return Verdict(FD, **base)
        return Verdict(OD, missing_elements=frozenset({"representative"}), **base)

    if not policy.intention:
        missing = {"intention", "target_countries"}
        if ttype == T2_ADEQUACY:
            missing.add("adequacy")
        else:
            missing.update(("safeguard", "copy_means"))
        return Verdict(OD, missing_elements=frozenset(missing), **base)

    missing: set[str] = set()
    reason = None
    if not policy.countries:
        missing.add("target_countries")
    if ttype == T2_ADEQUACY:
        if not policy.adequacy:
            missing.add("adequacy")
    else:
        valid, reason = _safeguard_validity(policy, event, juris)
        if not valid:
            missing.add("safeguard")
        if not policy.copy_means:
            missing.add("copy_means")

    if not missing and country in policy.countries:
        return Verdict(FD, **base)
    if policy.countries and country not in policy.countries:
        return Verdict(ID, missing_elements=frozenset(missing),
                       country_mismatch=(country, policy.countries),
                       invalid_safeguard_reason=reason, **base)
    return Verdict(AD, missing_elements=frozenset(missing),
                   invalid_safeguard_reason=reason, **base)


def judge_event(event: TransferEvent, policy: PolicyAnnotation,
                juris: JurisdictionConfig) -> list[Verdict]:
    """Judge every destination country of one event, in sorted order."""
    verdicts = []
    for country in sorted(event.dest_countries):
        ttype = classify_transfer_type(event, country, juris)
        verdicts.append(judge_transfer(ttype, event, country, policy, juris))
    return verdicts


@dataclass
class AppAssessment:
    app_id: str
    verdicts: list[Verdict] = field(default_factory=list)

    @property
    def overall(self) -> str:
        if not self.verdicts:
            return NO_TRANSFER
        if any(v.verdict_class in (AD, ID, OD) for v in self.verdicts):
            return POTENTIALLY_NON_COMPLIANT
        return COMPLIANT


def aggregate_app(app_id: str, verdicts: list[Verdict]) -> AppAssessment:
    """Fully compliant only if every applicable judgment is a full disclosure."""
    return AppAssessment(app_id=app_id, verdicts=list(verdicts))


def assess_app(app_id: str, events: list[TransferEvent], policy: PolicyAnnotation,
               juris: JurisdictionConfig) -> AppAssessment:
    verdicts = []
    for event in events:
        verdicts.extend(judge_event(event, policy, juris))
    return aggregate_app(app_id, verdicts)
