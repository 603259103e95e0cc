#!/usr/bin/env python3
"""Writes offline knowledge-base fixtures for an ontology.

One response file per request the graph builder issues, named by the SHA-256
of the request key. Terms without authored edges get an empty edge list;
titles without an authored page get a missing-page error.

usage: gen_kb_fixtures.py [--ontology data/ontology.json] [--out data/fixtures/kb]
"""

import argparse
import hashlib
import importlib.util
import json
import re
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
RELATIONS = ["Causes", "MotivatedByGoal", "HasSubevent", "HasFirstSubevent", "HasLastSubevent"]
PAGE_SIZE = 50


def concept(text):
    lang, _, label = text.rpartition(":") if re.match(r"^[a-z]{2}:", text) else ("en", "", text)
    return {"@id": f"/c/{lang}/" + "_".join(label.lower().split()), "label": label, "language": lang}


def conceptnet_request(term, relation):
    node = "_".join(term.lower().split())
    return f"conceptnet /query?node=/c/en/{node}&rel=/r/{relation}&limit={PAGE_SIZE}"


def wikipedia_request(title):
    return f"wikipedia action=parse&page={title}&prop=sections|wikitext&format=json&formatversion=2"


def sections(wikitext):
    out = []
    for i, m in enumerate(re.finditer(r"^(={2,6})\s*(.*?)\s*\1\s*$", wikitext, re.M)):
        out.append({"toclevel": len(m.group(1)) - 1, "level": str(len(m.group(1))), "line": m.group(2),
                    "number": str(i + 1), "index": str(i + 1)})
    return out


def write(out_dir, request, payload):
    name = hashlib.sha256(request.encode("utf-8")).hexdigest() + ".json"
    (out_dir / name).write_text(json.dumps(payload, indent=1, sort_keys=True, ensure_ascii=False) + "\n",
                                encoding="utf-8")
    return name


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ontology", type=Path, default=ROOT / "data" / "ontology.json")
    ap.add_argument("--sources", type=Path, default=ROOT / "data" / "kb_sources")
    ap.add_argument("--out", type=Path, default=ROOT / "data" / "fixtures" / "kb")
    args = ap.parse_args()

    ontology = json.loads(args.ontology.read_text(encoding="utf-8"))
    edges_by_term = json.loads((args.sources / "conceptnet.json").read_text(encoding="utf-8"))
    spec = importlib.util.spec_from_file_location("wikipedia_pages", args.sources / "wikipedia.py")
    pages = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(pages)

    args.out.mkdir(parents=True, exist_ok=True)
    for old in args.out.glob("*.json"):
        old.unlink()

    written = 0
    for event in ontology["events"]:
        for term in event["query_terms"]:
            for rel in RELATIONS:
                edges = []
                for start, r, end, weight in edges_by_term.get(term, []):
                    if r != rel:
                        continue
                    s, e = concept(start), concept(end)
                    edges.append({"@id": f"/a/[/r/{rel}/,{s['@id']}/,{e['@id']}/]", "start": s, "end": e,
                                  "rel": {"@id": f"/r/{rel}", "label": rel}, "weight": weight})
                write(args.out, conceptnet_request(term, rel), {"edges": edges})
                written += 1
        for title in event.get("wikipedia_titles", []):
            text = pages.PAGES.get(title)
            if text is None:
                payload = {"error": {"code": "missingtitle", "info": "The page you specified doesn't exist."}}
            else:
                payload = {"parse": {"title": title, "sections": sections(text), "wikitext": text}}
            write(args.out, wikipedia_request(title), payload)
            written += 1
    print(f"wrote {written} fixture files to {args.out}")


if __name__ == "__main__":
    main()
