#!/usr/bin/env python3
"""Writes a deterministic bibliographic N-Triples dataset: journal articles with
DOIs, contributor roles chained by oco:hasNext, persons and journals.
Two persons (ra/dup-a, ra/dup-b) are seeded duplicates sharing name and ORCID."""

import argparse
import random

BASE = "https://w3id.org/oc/meta/"
RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
FABIO = "http://purl.org/spar/fabio/"
DATACITE = "http://purl.org/spar/datacite/"
LITERAL = "http://www.essepuntato.it/2010/06/literalreification/hasLiteralValue"
DCTERMS_TITLE = "http://purl.org/dc/terms/title"
PRISM_DATE = "http://prismstandard.org/namespaces/basic/2.0/publicationDate"
PRO = "http://purl.org/spar/pro/"
FOAF = "http://xmlns.com/foaf/0.1/"
PART_OF = "http://purl.org/vocab/frbr/core#partOf"
HAS_NEXT = "https://w3id.org/oc/ontology/hasNext"
GYEAR = "http://www.w3.org/2001/XMLSchema#gYear"

GIVEN = ["Ada", "Alan", "Grace", "Edsger", "Barbara", "Donald", "Frances", "John", "Margaret", "Tim"]
FAMILY = ["Lovelace", "Turing", "Hopper", "Dijkstra", "Liskov", "Knuth", "Allen", "McCarthy", "Hamilton", "Lee"]
JOURNALS = ["Scientometrics", "Quantitative Science Studies", "Journal of Documentation",
            "Semantic Web", "Data Science"]


def iri(s):
    return "<" + s + ">"


def lit(s, dt=None):
    s = s.replace("\\", "\\\\").replace('"', '\\"')
    return '"' + s + '"' + ("^^" + iri(dt) if dt else "")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--articles", type=int, default=100)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("out")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    lines = []

    def t(s, p, o):
        lines.append(f"{iri(s)} {iri(p)} {o} .")

    for j, title in enumerate(JOURNALS, start=1):
        br = f"{BASE}br/j{j}"
        t(br, RDF_TYPE, iri(FABIO + "Journal"))
        t(br, DCTERMS_TITLE, lit(title))

    ids = 0
    roles = 0
    persons = 0

    def identifier(scheme, value):
        nonlocal ids
        ids += 1
        node = f"{BASE}id/{ids}"
        t(node, RDF_TYPE, iri(DATACITE + "Identifier"))
        t(node, DATACITE + "usesIdentifierScheme", iri(DATACITE + scheme))
        t(node, LITERAL, lit(value))
        return node

    def person(given, family, orcid=None, name=None):
        nonlocal persons
        persons += 1
        node = f"{BASE}ra/{persons}"
        t(node, RDF_TYPE, iri(FOAF + "Agent"))
        t(node, FOAF + "givenName", lit(given))
        t(node, FOAF + "familyName", lit(family))
        if orcid:
            t(node, DATACITE + "hasIdentifier", iri(identifier("orcid", orcid)))
        return node

    def dup(name):
        node = f"{BASE}ra/{name}"
        t(node, RDF_TYPE, iri(FOAF + "Agent"))
        t(node, FOAF + "name", lit("Silvio Peroni"))
        t(node, DATACITE + "hasIdentifier", iri(identifier("orcid", "0000-0003-0530-4305")))
        return node

    dup_a = dup("dup-a")
    dup_b = dup("dup-b")

    for i in range(1, args.articles + 1):
        br = f"{BASE}br/{i}"
        t(br, RDF_TYPE, iri(FABIO + "JournalArticle"))
        t(br, DCTERMS_TITLE, lit(f"Article {i}: {rng.choice(['Citations', 'Metadata', 'Provenance', 'Graphs'])} study"))
        t(br, PRISM_DATE, lit(str(2000 + i % 24), GYEAR))
        t(br, DATACITE + "hasIdentifier", iri(identifier("doi", f"10.1234/ART.{i}")))
        t(br, PART_OF, iri(f"{BASE}br/j{1 + i % len(JOURNALS)}"))
        holders = []
        if i == 1:
            holders.append(dup_a)
        elif i == 2:
            holders.append(dup_b)
        while len(holders) < 2:
            holders.append(person(rng.choice(GIVEN), rng.choice(FAMILY),
                                  orcid=f"0000-0002-{rng.randint(1000, 9999)}-{rng.randint(100, 999)}X"
                                  if rng.random() < 0.3 else None))
        previous = None
        for holder in holders:
            roles += 1
            role = f"{BASE}ar/{roles}"
            t(br, PRO + "isDocumentContextFor", iri(role))
            t(role, RDF_TYPE, iri(PRO + "RoleInTime"))
            t(role, PRO + "withRole", iri(PRO + "author"))
            t(role, PRO + "isHeldBy", iri(holder))
            if previous:
                t(previous, HAS_NEXT, iri(role))
            previous = role

    with open(args.out, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
