"""OAI-PMH subset exposing stored surrogates for incremental harvesting.

Five verbs are served (Identify, ListMetadataFormats, ListIdentifiers,
ListRecords, GetRecord) with the single metadata format ``pwc.rdf``. Item
identifiers are the objects' preferredIdentifiers, datestamps are the
objects' creation/modification instants at second granularity, and
ListRecords/ListIdentifiers paginate with resumption tokens that are
invalidated by any store write.
"""

from __future__ import annotations

import base64
import binascii
import json
from datetime import datetime, timezone
from xml.sax.saxutils import escape, quoteattr

from .repository import (
    NotFound,
    RangeError,
    Repository,
    format_datestamp,
    now_utc,
)

OAI_NS = "http://www.openarchives.org/OAI/2.0/"
METADATA_PREFIX = "pwc.rdf"

_VERBS = {"Identify", "ListMetadataFormats", "ListIdentifiers", "ListRecords", "GetRecord", "ListSets"}
_ALLOWED_ARGS = {
    "Identify": set(),
    "ListMetadataFormats": {"identifier"},
    "ListIdentifiers": {"metadataPrefix", "from", "until", "set", "resumptionToken"},
    "ListRecords": {"metadataPrefix", "from", "until", "set", "resumptionToken"},
    "GetRecord": {"identifier", "metadataPrefix"},
    "ListSets": {"resumptionToken"},
}


class OaiError(Exception):
    """Protocol-level error rendered as an OAI error element."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


def handle_verb(repo: Repository, harvest_base: str, params: dict[str, str]) -> str:
    """Dispatch one protocol request; always returns a response document."""
    try:
        return _dispatch(repo, harvest_base, params)
    except OaiError as err:
        return _error_response(harvest_base, params, err)


def _dispatch(repo: Repository, base: str, params: dict[str, str]) -> str:
    verb = params.get("verb")
    if verb not in _VERBS:
        raise OaiError("badVerb", f"unknown or missing verb {verb!r}")
    extra = set(params) - _ALLOWED_ARGS[verb] - {"verb"}
    if extra:
        raise OaiError("badArgument", f"illegal arguments for {verb}: {sorted(extra)}")
    if "set" in params:
        raise OaiError("noSetHierarchy", "this repository does not maintain sets")
    if verb == "Identify":
        return _identify(repo, base, params)
    if verb == "ListMetadataFormats":
        return _list_metadata_formats(repo, base, params)
    if verb == "ListSets":
        raise OaiError("noSetHierarchy", "this repository does not maintain sets")
    if verb == "GetRecord":
        return _get_record(repo, base, params)
    return _list(repo, base, params, with_metadata=(verb == "ListRecords"))


def _respond(base: str, params: dict[str, str], body: list[str], error: OaiError | None = None) -> str:
    verb = params.get("verb")
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<OAI-PMH xmlns="{OAI_NS}">',
        f"  <responseDate>{format_datestamp(now_utc())}</responseDate>",
    ]
    if error is not None and error.code in ("badVerb", "badArgument"):
        # request attributes must be dropped when they cannot be validated
        lines.append(f"  <request>{escape(base)}</request>")
    else:
        attrs = "".join(
            f" {key}={quoteattr(value)}"
            for key, value in sorted(params.items())
            if key != "verb"
        )
        lines.append(f"  <request verb={quoteattr(verb or '')}{attrs}>{escape(base)}</request>")
    if error is not None:
        lines.append(f"  <error code={quoteattr(error.code)}>{escape(str(error))}</error>")
    else:
        lines.append(f"  <{verb}>")
        lines.extend(body)
        lines.append(f"  </{verb}>")
    lines.append("</OAI-PMH>")
    return "\n".join(lines) + "\n"


def _error_response(base: str, params: dict[str, str], err: OaiError) -> str:
    return _respond(base, params, [], error=err)


def _identify(repo: Repository, base: str, params: dict[str, str]) -> str:
    listing = repo.list_since()
    earliest = listing[0][1] if listing else datetime(1970, 1, 1, tzinfo=timezone.utc)
    body = [
        f"    <repositoryName>{escape(repo.provider)}</repositoryName>",
        f"    <baseURL>{escape(base)}</baseURL>",
        "    <protocolVersion>2.0</protocolVersion>",
        f"    <adminEmail>admin@{escape(repo.config.name)}.invalid</adminEmail>",
        f"    <earliestDatestamp>{format_datestamp(earliest)}</earliestDatestamp>",
        "    <deletedRecord>no</deletedRecord>",
        "    <granularity>YYYY-MM-DDThh:mm:ssZ</granularity>",
    ]
    return _respond(base, params, body)


def _list_metadata_formats(repo: Repository, base: str, params: dict[str, str]) -> str:
    if "identifier" in params:
        try:
            repo.get_document(params["identifier"])
        except NotFound:
            raise OaiError("idDoesNotExist", params["identifier"]) from None
    body = [
        "    <metadataFormat>",
        f"      <metadataPrefix>{METADATA_PREFIX}</metadataPrefix>",
        "      <schema>http://www.openarchives.org/OAI/2.0/rdf.xsd</schema>",
        "      <metadataNamespace>info:pathways/core#</metadataNamespace>",
        "    </metadataFormat>",
    ]
    return _respond(base, params, body)


def _require_prefix(params: dict[str, str]) -> None:
    prefix = params.get("metadataPrefix")
    if prefix is None:
        raise OaiError("badArgument", "metadataPrefix is required")
    if prefix != METADATA_PREFIX:
        raise OaiError("cannotDisseminateFormat", f"unsupported metadataPrefix {prefix!r}")


def _parse_time(value: str, end_of_day: bool) -> datetime:
    try:
        if len(value) == 10:
            base = datetime.strptime(value, "%Y-%m-%d")
            if end_of_day:
                base = base.replace(hour=23, minute=59, second=59)
            return base.replace(tzinfo=timezone.utc)
        return datetime.strptime(value, "%Y-%m-%dT%H:%M:%SZ").replace(tzinfo=timezone.utc)
    except ValueError:
        raise OaiError("badArgument", f"bad datetime {value!r}") from None


def _metadata_block(repo: Repository, pid: str) -> list[str]:
    data, _ = repo.get_document(pid)
    text = data.decode("utf-8")
    if text.startswith("<?xml"):
        text = text.split("?>", 1)[1].lstrip("\n")
    return ["      <metadata>"] + [
        "        " + line for line in text.rstrip("\n").split("\n")
    ] + ["      </metadata>"]


def _header(pid: str, stamp: datetime) -> list[str]:
    return [
        "      <header>",
        f"        <identifier>{escape(pid)}</identifier>",
        f"        <datestamp>{format_datestamp(stamp)}</datestamp>",
        "      </header>",
    ]


def _get_record(repo: Repository, base: str, params: dict[str, str]) -> str:
    if "identifier" not in params:
        raise OaiError("badArgument", "identifier is required")
    _require_prefix(params)
    pid = params["identifier"]
    try:
        _, stamp = repo.get_document(pid)
    except NotFound:
        raise OaiError("idDoesNotExist", pid) from None
    body = ["    <record>"]
    body.extend(_header(pid, stamp))
    body.extend(_metadata_block(repo, pid))
    body.append("    </record>")
    return _respond(base, params, body)


def _encode_token(cursor: int, from_s: str | None, until_s: str | None, generation: int) -> str:
    payload = {
        "c": cursor,
        "f": from_s,
        "u": until_s,
        "t": format_datestamp(now_utc()),
        "g": generation,
    }
    return base64.urlsafe_b64encode(json.dumps(payload).encode("utf-8")).decode("ascii")


def _decode_token(token: str) -> dict:
    try:
        payload = json.loads(base64.urlsafe_b64decode(token.encode("ascii")))
        if not isinstance(payload["c"], int):
            raise ValueError("cursor")
        return payload
    except (ValueError, KeyError, binascii.Error, UnicodeDecodeError):
        raise OaiError("badResumptionToken", "cannot decode resumption token") from None


def _list(repo: Repository, base: str, params: dict[str, str], with_metadata: bool) -> str:
    if "resumptionToken" in params:
        if len(params) > 2:
            raise OaiError("badArgument", "resumptionToken is an exclusive argument")
        token = _decode_token(params["resumptionToken"])
        if token["g"] != repo.generation():
            raise OaiError("badResumptionToken", "store changed since token was issued")
        cursor = token["c"]
        from_s, until_s = token["f"], token["u"]
    else:
        _require_prefix(params)
        cursor = 0
        from_s = params.get("from")
        until_s = params.get("until")

    from_dt = _parse_time(from_s, end_of_day=False) if from_s else None
    until_dt = _parse_time(until_s, end_of_day=True) if until_s else None
    try:
        listing = repo.list_since(from_dt, until_dt)
    except RangeError as err:
        raise OaiError("badArgument", str(err)) from None
    if not listing:
        raise OaiError("noRecordsMatch", "no objects in the requested range")
    if cursor >= len(listing) and cursor > 0:
        raise OaiError("badResumptionToken", "cursor beyond end of list")

    page = listing[cursor : cursor + repo.config.page_size]
    body = []
    for pid, stamp in page:
        if with_metadata:
            body.append("    <record>")
            body.extend(_header(pid, stamp))
            body.extend(_metadata_block(repo, pid))
            body.append("    </record>")
        else:
            body.extend("  " + line for line in _header(pid, stamp))
    next_cursor = cursor + len(page)
    if next_cursor < len(listing):
        token = _encode_token(next_cursor, from_s, until_s, repo.generation())
        body.append(
            f'    <resumptionToken completeListSize="{len(listing)}" cursor="{cursor}">{token}</resumptionToken>'
        )
    elif cursor > 0:
        # closing an active token flow: empty token signals completion
        body.append(f'    <resumptionToken completeListSize="{len(listing)}" cursor="{cursor}"/>')
    return _respond(base, params, body)
