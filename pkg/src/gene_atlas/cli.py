"""Operator command line: ingestion, queries, generation, serving.

Every invocation prints exactly one JSON document on stdout; diagnostics go
to stderr. Exit codes: 0 success, 1 operational error (the document is then
{code, message}), 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from . import annotation, api, colors, corpus_gen, explore, narrative, store
from .providers import ProviderRefusal, ProviderTimeout, get_provider
from .records import DuplicateIdError, RecordValidationError, to_document
from .vocab import GeneTag, UnknownNameError


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # one-line usage errors, exit 2
        print(f"{self.prog}: {message}", file=sys.stderr)
        sys.exit(2)


def _emit(doc: dict, code: int = 0) -> int:
    print(json.dumps(doc, ensure_ascii=False, indent=2))
    return code


_ERROR_CODES = {
    store.LockHeldError: "lock_held",
    store.MalformedDocumentError: "malformed_document",
    store.FormatVersionError: "version_mismatch",
    store.UnknownCostumeError: "unknown_costume",
    explore.UnknownIdError: "unknown_costume",
    explore.EmptyQueryError: "empty_query",
    DuplicateIdError: "duplicate_id",
    RecordValidationError: "validation_failure",
    annotation.CostumeIdMismatchError: "costume_id_mismatch",
    annotation.InvalidDraftError: "invalid_draft",
    annotation.StaleReportError: "stale_report",
    narrative.ThemeUnavailableError: "theme_unavailable",
    narrative.IdMismatchError: "id_mismatch",
    narrative.UnresolvedPlaceholderError: "unresolved_placeholder",
    colors.ImageDecodeError: "image_decode",
    UnknownNameError: "unknown_name",
    ProviderTimeout: "provider_timeout",
    ProviderRefusal: "provider_refusal",
    FileNotFoundError: "file_not_found",
}


def _error_code(exc: Exception) -> str:
    for cls, code in _ERROR_CODES.items():
        if isinstance(exc, cls):
            return code
    return "invalid_argument"


def _read_json(path: str):
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def _cmd_ingest(args) -> int:
    meta = _read_json(args.meta)
    with open(args.text, encoding="utf-8") as handle:
        source_text = handle.read()
    draft_a = annotation.draft_from_document(_read_json(args.draft_a))
    draft_b = annotation.draft_from_document(_read_json(args.draft_b))
    decisions = _read_json(args.decisions) if args.decisions else {}

    report = annotation.compare_drafts(draft_a, draft_b)
    try:
        merged = annotation.resolve(report, draft_a, draft_b, decisions)
    except annotation.MissingDecisionError as exc:
        _emit(
            {
                "report": report.to_document(),
                "error": {"code": "missing_decision", "message": str(exc)},
            }
        )
        return 1

    images = []
    if args.image:
        images.append(
            annotation.DecodedImage(ref=args.image, pixels=colors.read_image_rgb(args.image))
        )
    params = colors.ColorParams(k=args.k, seed=args.seed)
    with store.CollectionStore(args.data_dir) as st:
        record = annotation.ingest_record(
            source_text,
            meta,
            images,
            merged,
            color_params=params,
            existing_ids=frozenset(st.records),
        )
        st.add_record(record)
    return _emit({"report": report.to_document(), "record": to_document(record)})


def _cmd_colors(args) -> int:
    pixels = colors.read_image_rgb(args.image)
    profile = colors.extract_profile(
        pixels, colors.ColorParams(k=args.k, seed=args.seed)
    )
    return _emit(profile.to_document())


def _cmd_browse(args) -> int:
    tag = GeneTag.parse(args.tag)
    with store.CollectionStore(args.data_dir) as st:
        index = explore.build_index(list(st.records.values()))
    result = explore.browse_by_tag(
        index, tag, explore.PageRequest(page=args.page, page_size=args.page_size)
    )
    return _emit({"total": result.total, "ids": list(result.ids)})


def _cmd_search(args) -> int:
    with store.CollectionStore(args.data_dir) as st:
        index = explore.build_index(list(st.records.values()))
    result = explore.search_keyword(
        index, args.q, explore.PageRequest(page=args.page, page_size=args.page_size)
    )
    return _emit(
        {
            "total": result.total,
            "hits": [{"costume_id": h.costume_id, "score": h.score} for h in result.hits],
        }
    )


def _cmd_generate(args) -> int:
    request = narrative.CoCreationRequest(
        costume_id=args.costume,
        theme=narrative.Theme(args.theme[:1].upper() + args.theme[1:].lower()),
        inner_concept=args.concept,
        user_note=args.note,
        seed=args.seed,
    )
    provider = get_provider(args.provider, args.endpoint)
    with store.CollectionStore(args.data_dir) as st:
        record = st.records.get(args.costume)
        if record is None:
            raise explore.UnknownIdError(f"unknown costume id: {args.costume!r}")
        prompt = narrative.assemble_prompt(record, request)
        artifact = narrative.generate(provider, prompt, request)
        report = narrative.validate_scaffold(artifact, prompt)
        artifact_id = st.append_artifact(artifact)
    return _emit(
        {
            "artifact_id": artifact_id,
            "artifact": artifact.to_document(),
            "scaffold_report": report.to_document(),
        }
    )


def _cmd_serve(args) -> int:
    api.serve(
        args.data_dir,
        host=args.host,
        port=args.port,
        provider=args.provider,
        provider_endpoint=args.endpoint,
    )
    return 0


def _cmd_seed_corpus(args) -> int:
    corpus = corpus_gen.generate_corpus(args.n, args.seed)
    os.makedirs(args.data_dir, exist_ok=True)
    path = os.path.join(args.data_dir, store.CORPUS_FILE)
    store.save_corpus(corpus, path)
    with open(path, "rb") as handle:
        digest = hashlib.sha256(handle.read()).hexdigest()
    return _emit({"generated": args.n, "path": path, "corpus_sha256": digest})


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gene-atlas", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="compare drafts, resolve, and ingest a record")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--meta", required=True, help="JSON with id/title/ethnic_group/region")
    p.add_argument("--text", required=True, help="source description text file")
    p.add_argument("--draft-a", required=True)
    p.add_argument("--draft-b", required=True)
    p.add_argument("--decisions", help="JSON map of field_path to A|B")
    p.add_argument("--image", help="costume image for color extraction")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("colors", help="extract a color profile from an image")
    p.add_argument("--image", required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_colors)

    p = sub.add_parser("browse", help="browse costumes by tag")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--tag", required=True, help="Category:Value, e.g. Form:Hat")
    p.add_argument("--page", type=int, default=1)
    p.add_argument("--page-size", type=int, default=20)
    p.set_defaults(func=_cmd_browse)

    p = sub.add_parser("search", help="keyword search")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--page", type=int, default=1)
    p.add_argument("--page-size", type=int, default=20)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("generate", help="co-create a story for a costume")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--costume", required=True)
    p.add_argument("--theme", required=True, help="religious | festive | artistic")
    p.add_argument("--concept", required=True, help="inner concept name, e.g. Harmony")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--note", default="")
    p.add_argument("--provider", default="mock")
    p.add_argument("--endpoint", help="remote provider URL")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--provider", default="mock")
    p.add_argument("--endpoint", help="remote provider URL")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("seed-corpus", help="generate the synthetic fixture corpus")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=_cmd_seed_corpus)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - every error becomes {code, message}
        _emit({"code": _error_code(exc), "message": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
