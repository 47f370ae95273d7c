"""Declarative, ordered text-cleaning rules.

Rules are data, not code: each rule removes a literal, removes a regex
pattern, or normalizes whitespace.  A rule set is applied in list order and
iterated to a fixed point, which makes the whole pass idempotent even when
one removal exposes a new match for an earlier rule.

Math markers (the ``mathusepackage`` residue left by LaTeX-heavy articles)
are deliberately retained as a signal of mathematical content.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from genrelab.corpus import Document, Manifest
from genrelab.errors import DataError

# Collapses runs of any whitespace (incl. NBSP) except newlines to a single
# space; newline runs collapse separately so paragraph structure survives.
_WS_RUN = re.compile(r"[^\S\n]+")
_NL_RUN = re.compile(r" ?\n[\s]*\n[\s]* ?")
_NL_PAD = re.compile(r" *\n *")

RULE_KINDS = ("literal-remove", "pattern-remove", "whitespace-normalize")


@dataclass(frozen=True)
class CleaningRule:
    """One cleaning step.

    ``scope`` limits a rule to a single source name (default: all sources).
    ``bibliography_only`` restricts matching to the references block, i.e.
    the text after the last line equal to "References"/"Bibliography";
    journal identifiers are removed there but kept in the main text.
    """

    name: str
    kind: str
    payload: str = ""
    scope: str = "all-sources"
    bibliography_only: bool = False

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise DataError(f"rule {self.name!r}: unknown kind {self.kind!r}")
        if self.kind == "pattern-remove":
            try:
                re.compile(self.payload)
            except re.error as exc:
                raise DataError(f"rule {self.name!r}: bad pattern: {exc}")

    def apply(self, text: str) -> str:
        if self.kind == "literal-remove":
            return text.replace(self.payload, "")
        if self.kind == "pattern-remove":
            return re.sub(self.payload, "", text)
        # whitespace-normalize
        text = _WS_RUN.sub(" ", text)
        text = _NL_RUN.sub("\n\n", text)
        text = _NL_PAD.sub("\n", text)
        return text.strip()


@dataclass(frozen=True)
class RuleSet:
    """An ordered list of rules; order is significant and versioned."""

    rules: tuple[CleaningRule, ...]
    version: str = "1"

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        names = [r.name for r in self.rules]
        if len(names) != len(set(names)):
            raise DataError("duplicate rule names in rule set")

    def clean_text(self, text: str, source: str | None = None, max_passes: int = 10) -> str:
        """Apply all applicable rules in order, iterating to a fixed point."""
        for _ in range(max_passes):
            before = text
            for rule in self.rules:
                if rule.scope != "all-sources" and rule.scope != source:
                    continue
                if rule.bibliography_only:
                    text = _apply_in_bibliography(rule, text)
                else:
                    text = rule.apply(text)
            if text == before:
                break
        return text


_BIB_HEADING = re.compile(r"^\s*(References|Bibliography)\s*$", re.MULTILINE | re.IGNORECASE)


def _apply_in_bibliography(rule: CleaningRule, text: str) -> str:
    matches = list(_BIB_HEADING.finditer(text))
    if not matches:
        return text
    cut = matches[-1].end()
    return text[:cut] + rule.apply(text[cut:])


def clean_document(d: Document, rules: RuleSet) -> Document:
    """Return a copy with ``clean_text`` set; ``raw_text`` is never touched."""
    if not d.raw_text:
        raise DataError(f"document {d.id!r} has no raw_text to clean")
    return d.with_clean_text(rules.clean_text(d.raw_text, source=d.source))


def clean_manifest(m: Manifest, rules: RuleSet) -> Manifest:
    return Manifest(
        documents=tuple(clean_document(d, rules) for d in m.documents),
        version=m.version,
        seed=m.seed,
    )


# --- The codified default rules -------------------------------------------

# Boilerplate literals observed on the source websites.  The disclaimers on
# live pages are longer than the excerpts below; literals marked provisional
# are matched by prefix patterns instead.
_SITE_BOILERPLATE = [
    "Sign up",
    "Get the latest in health news delivered to your inbox!",
    "This site is protected by reCAPTCHA and the Google Privacy Policy "
    "and Terms of Service apply.",
    "Share this page to Facebook",
    "This site requires JavaScript to run correctly.",
    "Save Article",
]

_LICENSE_PATTERNS = [
    (
        "license-open-access",
        r"This is an open access article (?:distributed |under the terms of )"
        r"[^\n.]*(?:\.|$)",
    ),
    ("license-image-credit", r"Image credit:[^\n]*"),
]


def default_ruleset() -> RuleSet:
    """The codified cleaning protocol for the released corpus versions.

    Order: structural noise first (control characters), then site
    boilerplate, disclaimers, licenses, author blocks, PDF fragments, DOIs,
    bibliography-scoped journal identifiers, and finally whitespace
    normalization to absorb the holes left by the removals.
    """
    rules: list[CleaningRule] = [
        # Control chars except \n and \t, zero-width chars, soft hyphens:
        # the classic PDF/HTML extraction artifacts.
        CleaningRule(
            name="special-characters",
            kind="pattern-remove",
            payload=(
                "[\\x00-\\x08\\x0b\\x0c\\x0e-\\x1f\\x7f"
                "\\u200b\\u200c\\u200d\\u2060\\ufeff\\u00ad]"
            ),
        ),
    ]
    for i, literal in enumerate(_SITE_BOILERPLATE):
        rules.append(
            CleaningRule(name=f"boilerplate-{i}", kind="literal-remove", payload=literal)
        )
    rules += [
        # Provisional: live pages truncate these paragraphs differently.
        CleaningRule(
            name="disclaimer-paragraph",
            kind="pattern-remove",
            payload=r"Disclaimer:\s[^\n]*",
        ),
        *(
            CleaningRule(name=name, kind="pattern-remove", payload=pat)
            for name, pat in _LICENSE_PATTERNS
        ),
        CleaningRule(
            name="author-information",
            kind="pattern-remove",
            payload=r"About the Authors?\b[^\n]*",
        ),
        CleaningRule(
            name="pdf-continuation",
            kind="literal-remove",
            payload="Continued from previous page",
        ),
        CleaningRule(
            name="doi",
            kind="pattern-remove",
            payload=r"(?:https?://)?(?:dx\.)?doi\.org/\S+|\bdoi:\s*\S+|\b10\.\d{4,9}/\S+",
        ),
        CleaningRule(
            name="journal-identifiers-bibliography",
            kind="pattern-remove",
            payload=r"British Medical Journal|\bBMJ\b|www\.biomedcentral\.com",
            bibliography_only=True,
        ),
        CleaningRule(name="whitespace", kind="whitespace-normalize"),
    ]
    return RuleSet(rules=tuple(rules), version="1")


def residue_audit(m: Manifest, k: int):
    """Per-class top-k TF-IDF terms, for spotting leftover parsing residue.

    Scoring is delegated to the feature module's class characterization; a
    curator inspects the output until every high-ranking term is explainable
    as genuinely characteristic of its class.
    """
    from genrelab.features import class_characterization

    if k < 1:
        raise DataError(f"residue_audit: k must be >= 1, got {k}")
    uncleaned = [d.id for d in m.documents if d.clean_text is None]
    if uncleaned:
        raise DataError(
            f"residue_audit: {len(uncleaned)} uncleaned documents "
            f"(first: {uncleaned[0]!r})"
        )
    return class_characterization(m, k)
