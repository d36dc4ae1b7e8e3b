"""Seed data emulating four heterogeneous source repositories.

Each profile loads a small set of objects into a reference repository:
an arXiv-like preprint server (article with a PDF and a companion dataset),
an aDORe-like archive (DOI-identified article with a bibliographic-citation
sub-entity), a DSpace-like institutional repository (handle-identified
article with a plain-text rendition), and a Fedora-like host that starts out
as an empty overlay-journal home.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Callable

from .model import (
    PERSISTENCE_PERSISTENT,
    PERSISTENCE_TRANSIENT,
    Datastream,
    Entity,
    ProviderInfo,
)

if TYPE_CHECKING:
    from .repository import Repository

# loc(payload, format_uri) -> dereferenceable URL hosted by the repository
Minter = Callable[[bytes, str], str]

ADORE_PROVIDER = "info:sid/library.lanl.gov:pathways"
ARXIV_PROVIDER = "info:sid/arxiv.org:pathways"
DSPACE_PROVIDER = "info:sid/dspace.demo:pathways"
FEDORA_PROVIDER = "info:sid/fedora.demo:pathways"

FMT_PDF = "info:pathways/fmt/pronom/1000"
FMT_TEXT = "info:pathways/fmt/pronom/x-fmt-111"
FMT_CSV = "info:pathways/fmt/pronom/x-fmt-18"

SEM_JOURNAL = "info:pathways/semantic/journal"
SEM_ISSUE = "info:pathways/semantic/journal-issue"
SEM_ARTICLE = "info:pathways/semantic/journal-article"
SEM_CITATION = "info:pathways/semantic/bibliographic-citation"
SEM_DATASET = "info:pathways/semantic/dataset"

ADORE_ARTICLE_ID = "info:doi/10.1016/j.dyepig.2004.12.010"
ADORE_CITATION_ID = "info:lanl-repo/ssm/doi-10.1016/j.dyepig.2004.12.010"
ADORE_DATASET_ID = "info:lanl-repo/ds/pigment-survey-2005"
ARXIV_ARTICLE_ID = "oai:arXiv.org:astro-ph/0601001"
ARXIV_DATASET_ID = "oai:arXiv.org:dataset/astro-ph/0601001"
DSPACE_ARTICLE_ID = "hdl:1802/4242"
DSPACE_CITATION_ID = "hdl:1802/4243"
FEDORA_JOURNAL_ID = "info:fedora-demo/overlay-journal"

# One mock payload per hosted datastream. The PDF is a stub (binary fidelity is
# what matters, not renderability); text payloads are what the search pipeline
# dereferences and indexes.
PDF_STUB = (
    b"%PDF-1.4\n"
    b"1 0 obj << /Type /Catalog /Pages 2 0 R >> endobj\n"
    b"2 0 obj << /Type /Pages /Kids [] /Count 0 >> endobj\n"
    b"trailer << /Root 1 0 R >>\n"
    b"%%EOF\n"
)

ARXIV_DATASET_CSV = (
    b"epoch_mjd,flux_density_jy\n"
    b"53736.0,0.82\n"
    b"53737.0,0.79\n"
    b"53738.0,0.91\n"
)

ADORE_DATASET_CSV = (
    b"wavelength_nm,absorbance\n"
    b"410,0.32\n"
    b"520,0.58\n"
    b"630,0.11\n"
)

DSPACE_ARTICLE_TEXT = (
    b"Spectral stability of heliotrope pigment compounds under ultraviolet\n"
    b"exposure. We report absorbance measurements for six candidate dye\n"
    b"formulations and compare fading rates against archival samples. Data\n"
    b"and supplementary tables are deposited alongside this article; see the\n"
    b"info identifiers in the record for the version of record.\n"
)

DSPACE_CITATION_TEXT = (
    b"Citation record: pigment chemistry survey, institutional repository\n"
    b"demo collection, item 4243.\n"
)


def adore_article() -> Entity:
    """The DOI-identified archive article with its citation sub-entity."""
    return Entity(
        identifiers=[ADORE_ARTICLE_ID],
        provider_info=ProviderInfo(ADORE_PROVIDER, ADORE_ARTICLE_ID),
        semantic=SEM_ARTICLE,
        persistence=PERSISTENCE_PERSISTENT,
        children=[
            Entity(
                identifiers=[ADORE_CITATION_ID],
                provider_info=ProviderInfo(ADORE_PROVIDER, ADORE_CITATION_ID),
                semantic=SEM_CITATION,
                persistence=PERSISTENCE_PERSISTENT,
                datastreams=[
                    Datastream(
                        format=FMT_PDF,
                        location="http://purl.lanl.gov/demo/adore-arcfile/00e682eb-a87eb27b0c79",
                    )
                ],
            )
        ],
    )


def arxiv_article(loc: Minter) -> Entity:
    """Preprint article with a hosted PDF and a reference to its dataset."""
    return Entity(
        identifiers=["info:arxiv/astro-ph/0601001", ARXIV_ARTICLE_ID],
        provider_info=ProviderInfo(ARXIV_PROVIDER, ARXIV_ARTICLE_ID),
        semantic=SEM_ARTICLE,
        persistence=PERSISTENCE_PERSISTENT,
        datastreams=[Datastream(format=FMT_PDF, location=loc(PDF_STUB, FMT_PDF))],
        children=[
            Entity(
                provider_info=ProviderInfo(ARXIV_PROVIDER, ARXIV_DATASET_ID),
                semantic=SEM_DATASET,
            )
        ],
    )


def arxiv_dataset(loc: Minter) -> Entity:
    return Entity(
        identifiers=["info:arxiv/dataset/astro-ph/0601001"],
        provider_info=ProviderInfo(ARXIV_PROVIDER, ARXIV_DATASET_ID),
        semantic=SEM_DATASET,
        persistence=PERSISTENCE_TRANSIENT,
        datastreams=[Datastream(format=FMT_CSV, location=loc(ARXIV_DATASET_CSV, FMT_CSV))],
    )


def adore_dataset(loc: Minter) -> Entity:
    return Entity(
        identifiers=[ADORE_DATASET_ID],
        provider_info=ProviderInfo(ADORE_PROVIDER, ADORE_DATASET_ID),
        semantic=SEM_DATASET,
        persistence=PERSISTENCE_PERSISTENT,
        datastreams=[Datastream(format=FMT_CSV, location=loc(ADORE_DATASET_CSV, FMT_CSV))],
    )


def dspace_article(loc: Minter) -> Entity:
    return Entity(
        identifiers=[DSPACE_ARTICLE_ID, "info:hdl/1802/4242"],
        provider_info=ProviderInfo(DSPACE_PROVIDER, DSPACE_ARTICLE_ID),
        semantic=SEM_ARTICLE,
        persistence=PERSISTENCE_PERSISTENT,
        datastreams=[
            Datastream(format=FMT_PDF, location=loc(PDF_STUB, FMT_PDF)),
            Datastream(format=FMT_TEXT, location=loc(DSPACE_ARTICLE_TEXT, FMT_TEXT)),
        ],
    )


def dspace_citation(loc: Minter) -> Entity:
    return Entity(
        identifiers=[DSPACE_CITATION_ID],
        provider_info=ProviderInfo(DSPACE_PROVIDER, DSPACE_CITATION_ID),
        semantic=SEM_CITATION,
        persistence=PERSISTENCE_TRANSIENT,
        datastreams=[Datastream(format=FMT_TEXT, location=loc(DSPACE_CITATION_TEXT, FMT_TEXT))],
    )


def fedora_journal() -> Entity:
    return Entity(
        identifiers=[FEDORA_JOURNAL_ID],
        provider_info=ProviderInfo(FEDORA_PROVIDER, FEDORA_JOURNAL_ID),
        semantic=SEM_JOURNAL,
        persistence=PERSISTENCE_PERSISTENT,
    )


PROFILES: dict[str, Callable[[Minter], list[Entity]]] = {
    "arxiv": lambda loc: [arxiv_article(loc), arxiv_dataset(loc)],
    "adore": lambda loc: [adore_article(), adore_dataset(loc)],
    "dspace": lambda loc: [dspace_article(loc), dspace_citation(loc)],
    "fedora": lambda loc: [fedora_journal()],
}


def seed(repo: Repository, profile: str) -> int:
    """Load one profile's objects into a repository; returns objects stored."""
    if profile not in PROFILES:
        raise KeyError(f"unknown seed profile {profile!r}")

    def loc(data: bytes, fmt: str) -> str:
        return repo.datastream_url(repo.store_datastream(data, fmt))

    roots = PROFILES[profile](loc)
    for root in roots:
        repo.store_object(root)
    return len(roots)
