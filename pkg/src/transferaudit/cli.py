"""Command-line interface.

Subcommands mirror the pipeline stages: `segment` policies, `train`
classifiers, `annotate` policies, `scan` flow logs, `check` events against
annotations, `report` aggregate results.  Exit codes: 0 success, 1 input
error, 2 internal error.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from pathlib import Path

from . import classifier, compliance, corpus, flows, linear, reports, transparency
from .countries import load_country_dictionary
from .errors import AuditError
from .features import SCHEMES, TF, TokenPipelineConfig
from .rules import load_rules


def _parse_ngram(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition("-")
    return int(lo), int(hi or lo)


def _cmd_segment(args) -> int:
    text = Path(args.policy).read_text(encoding="utf-8")
    doc = corpus.PolicyDocument(app_id=Path(args.policy).stem, raw_text=text)
    segments = corpus.segment_policy(doc, args.mode)
    out = sys.stdout
    for seg in segments:
        out.write(seg.text.replace("\\", "\\\\").replace("\n", "\\n") + "\n")
    return 0


_LABEL_FNS = {"intention": linear.intention_label, "adequacy": linear.adequacy_label}


def _cmd_train(args) -> int:
    data = corpus.load_corpus(args.corpus)
    if args.task == "adequacy":
        # layer-two model: fit on transfer-intention segments only
        data = corpus.Corpus(samples=[s for s in data.samples if s.intention_label == 1])
    ngram_min, ngram_max = _parse_ngram(args.ngram)
    pipeline = TokenPipelineConfig(ngram_min=ngram_min, ngram_max=ngram_max)
    train_cfg = linear.TrainConfig(alpha=args.alpha, epochs=args.epochs, seed=args.seed)
    label_fn = _LABEL_FNS[args.task]
    if args.kfold:
        result = linear.cross_validate(data, pipeline, args.weighting, train_cfg,
                                       args.kfold, args.seed, fit_on_all=args.fit_on_all,
                                       label_fn=label_fn)
        for i, fold in enumerate(result.folds):
            print(f"fold {i}: precision={fold.precision:.4f} recall={fold.recall:.4f} "
                  f"f_measure={fold.f_measure:.4f}")
        means = " ".join(f"{k}={v:.4f}" for k, v in sorted(result.means.items()))
        print(f"mean: {means}")
    if args.model_out:
        bundle = classifier.fit_text_classifier(data, pipeline, args.weighting,
                                                train_cfg, label_fn)
        bundle.save(args.model_out, args.task)
        print(f"saved {args.task} model to {args.model_out}")
    return 0


def _load_annotator(args) -> transparency.SegmentAnnotator:
    intention = classifier.TextClassifier.load(args.model_dir, "intention")
    adequacy = None
    if Path(args.model_dir, "adequacy.model.tsv").exists():
        adequacy = classifier.TextClassifier.load(args.model_dir, "adequacy")
    rules = load_rules(args.rules) if args.rules else transparency.default_rules()
    dictionary = load_country_dictionary(args.dict) if args.dict else load_country_dictionary()
    return transparency.SegmentAnnotator(
        intention_model=intention, adequacy_model=adequacy,
        rules=rules, dictionary=dictionary)


def _annotation_json(app_id: str, policy: transparency.PolicyAnnotation) -> dict:
    return {
        "app_id": app_id,
        "intention": policy.intention,
        "countries": sorted(policy.countries),
        "adequacy": policy.adequacy,
        "scc": policy.scc,
        "bcr": policy.bcr,
        "explicit_consent": policy.explicit_consent,
        "copy_means": policy.copy_means,
        "representative": policy.representative,
        "privacy_shield": policy.privacy_shield,
        "segments": [
            {"intention": s.intention, "countries": sorted(s.countries),
             "adequacy": s.adequacy, "scc": s.scc, "bcr": s.bcr,
             "explicit_consent": s.explicit_consent, "copy_means": s.copy_means,
             "representative": s.representative, "privacy_shield": s.privacy_shield}
            for s in policy.segments
        ],
    }


def _cmd_annotate(args) -> int:
    annotator = _load_annotator(args)
    for path in args.policies:
        text = Path(path).read_text(encoding="utf-8")
        doc = corpus.PolicyDocument(app_id=Path(path).stem, raw_text=text)
        segments = corpus.segment_policy(doc, args.mode)
        policy = annotator.annotate_policy([s.text for s in segments])
        print(json.dumps(_annotation_json(doc.app_id, policy), sort_keys=True))
    return 0


def _cmd_scan(args) -> int:
    records = flows.load_flow_log(args.flows)
    catalog = flows.load_catalog(args.catalog)
    owners = flows.load_owner_list(args.owners) if args.owners else flows.load_owner_list()
    geo = flows.load_geo_table(args.geo) if args.geo else flows.GeoTable()
    events = flows.build_transfer_events(records, catalog, owners, geo)
    for event in events:
        print(json.dumps({
            "app_id": event.app_id,
            "recipient_domain": event.recipient_domain,
            "data_types": sorted(event.data_types),
            "dest_countries": sorted(event.dest_countries),
            "recipient_kind": event.recipient.kind,
            "recipient_owner": event.recipient.owner_name,
            "recipient_hq": event.recipient.hq_country,
            "any_idle_flow": event.any_idle_flow,
        }, sort_keys=True))
    return 0


def _load_events(path) -> dict[str, list[flows.TransferEvent]]:
    by_app: dict[str, list[flows.TransferEvent]] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            kind = obj.get("recipient_kind", flows.THIRD_PARTY)
            event = flows.TransferEvent(
                app_id=obj["app_id"],
                recipient_domain=obj["recipient_domain"],
                data_types=frozenset(obj.get("data_types", [])),
                dest_countries=frozenset(obj["dest_countries"]),
                recipient=flows.RecipientInfo(
                    kind=kind, owner_name=obj.get("recipient_owner"),
                    hq_country=obj.get("recipient_hq")),
                any_idle_flow=bool(obj.get("any_idle_flow", False)),
            )
            by_app.setdefault(event.app_id, []).append(event)
    return by_app


def _load_annotations(path) -> dict[str, transparency.PolicyAnnotation]:
    annotations = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            segments = [
                transparency.SegmentAnnotation(
                    intention=s["intention"], countries=frozenset(s["countries"]),
                    adequacy=s["adequacy"], scc=s["scc"], bcr=s["bcr"],
                    explicit_consent=s["explicit_consent"], copy_means=s["copy_means"],
                    representative=s["representative"], privacy_shield=s["privacy_shield"])
                for s in obj.get("segments", [])
            ]
            policy = transparency.PolicyAnnotation(
                intention=obj["intention"], countries=frozenset(obj["countries"]),
                adequacy=obj["adequacy"], scc=obj["scc"], bcr=obj["bcr"],
                explicit_consent=obj["explicit_consent"], copy_means=obj["copy_means"],
                representative=obj["representative"],
                privacy_shield=obj["privacy_shield"], segments=segments)
            annotations[obj["app_id"]] = policy
    return annotations


def _verdict_line(v: compliance.Verdict) -> str:
    mismatch = ""
    if v.country_mismatch:
        actual, disclosed = v.country_mismatch
        mismatch = f"{actual}!={','.join(sorted(disclosed))}"
    return "\t".join([
        v.app_id, v.recipient_domain, v.country, v.transfer_type, v.verdict_class,
        ",".join(sorted(v.missing_elements)) or "-",
        mismatch or "-",
        v.invalid_safeguard_reason or "-",
    ])


def _cmd_check(args) -> int:
    events_by_app = _load_events(args.events)
    annotations = _load_annotations(args.annotations)
    juris = compliance.load_jurisdiction(args.jurisdiction)
    if args.date:
        juris = compliance.JurisdictionConfig(
            eu_set=juris.eu_set, adequacy_set=juris.adequacy_set,
            invalidated_frameworks=juris.invalidated_frameworks,
            assessment_date=datetime.date.fromisoformat(args.date))
    empty = transparency.PolicyAnnotation()
    for app_id in sorted(events_by_app):
        policy = annotations.get(app_id, empty)
        assessment = compliance.assess_app(app_id, events_by_app[app_id], policy, juris)
        for verdict in assessment.verdicts:
            print(_verdict_line(verdict))
        print(f"{app_id}\t-\t-\t-\t{assessment.overall}\t-\t-\t-")
    return 0


def _cmd_report(args) -> int:
    events_by_app = _load_events(args.events)
    annotations = _load_annotations(args.annotations)
    juris = compliance.load_jurisdiction(args.jurisdiction)
    assessments = []
    empty = transparency.PolicyAnnotation()
    app_ids = sorted(set(events_by_app) | set(annotations))
    for app_id in app_ids:
        assessments.append(compliance.assess_app(
            app_id, events_by_app.get(app_id, []),
            annotations.get(app_id, empty), juris))
    summary = reports.summarize(assessments, annotations)
    sys.stdout.buffer.write(reports.emit_report(summary, args.format))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transferaudit",
        description="Audit app cross-border personal-data transfers against "
                    "GDPR transparency requirements.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="split a policy file into segments")
    p.add_argument("policy")
    p.add_argument("--mode", choices=[corpus.FULLSTOP, corpus.BLANKLINE],
                   default=corpus.FULLSTOP)
    p.set_defaults(fn=_cmd_segment)

    p = sub.add_parser("train", help="train/evaluate a classifier on a corpus")
    p.add_argument("--task", choices=["intention", "adequacy"], default="intention")
    p.add_argument("--corpus", required=True)
    p.add_argument("--ngram", default="1-2", help="n-gram range, e.g. 1-2")
    p.add_argument("--weighting", choices=list(SCHEMES), default=TF)
    p.add_argument("--alpha", type=float, default=1e-3)
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kfold", type=int, default=0)
    p.add_argument("--fit-on-all", action="store_true",
                   help="fit the vocabulary on the whole corpus during CV")
    p.add_argument("--model-out", help="directory to save the trained model")
    p.set_defaults(fn=_cmd_train)

    p = sub.add_parser("annotate", help="annotate policy files (JSON per policy)")
    p.add_argument("policies", nargs="+")
    p.add_argument("--model-dir", required=True)
    p.add_argument("--rules")
    p.add_argument("--dict")
    p.add_argument("--mode", choices=[corpus.FULLSTOP, corpus.BLANKLINE],
                   default=corpus.FULLSTOP)
    p.set_defaults(fn=_cmd_annotate)

    p = sub.add_parser("scan", help="extract transfer events from a flow log")
    p.add_argument("--flows", required=True)
    p.add_argument("--catalog", required=True)
    p.add_argument("--owners")
    p.add_argument("--geo")
    p.set_defaults(fn=_cmd_scan)

    p = sub.add_parser("check", help="judge events against policy annotations")
    p.add_argument("--events", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--jurisdiction")
    p.add_argument("--date", help="override the assessment date (ISO)")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("report", help="aggregate events + annotations into a report")
    p.add_argument("--events", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--jurisdiction")
    p.add_argument("--format", choices=[reports.TEXT_TABLE, reports.MACHINE_LINES],
                   default=reports.TEXT_TABLE)
    p.set_defaults(fn=_cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (AuditError, FileNotFoundError, PermissionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - internal failures
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
