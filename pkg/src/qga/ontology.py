"""Event ontology and the dynamic question-template registry.

An event type declares an ordered role inventory. For each (event type,
target role) pair the registry stores an ordered list of question
templates; each template fills a distinct subset of the *other* roles
via [RoleName] placeholders. The first template of every entry is the
base template with no placeholders, so every mention has at least one
applicable question.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import RegistryError

# Placeholders are bracketed role names, e.g. "[Target]".
PLACEHOLDER_RE = re.compile(r"\[([A-Za-z][A-Za-z-]*)\]")


@dataclass(frozen=True)
class EventTypeDef:
    """An event type and its ordered argument-role inventory."""

    name: str
    roles: tuple[str, ...]


@dataclass(frozen=True)
class DynamicTemplate:
    """One question template for a (event type, target role) entry.

    `slots` is the ordered set of other roles this template mentions;
    each slot role occurs exactly once in `text` as "[Role]".
    """

    event_type: str
    target_role: str
    slots: tuple[str, ...]
    text: str

    def placeholders(self) -> list[str]:
        return PLACEHOLDER_RE.findall(self.text)


class TemplateCount(NamedTuple):
    """Result of expected_template_count.

    expected: 2^k over the k roles that appear in the entry's slot sets.
    stored: number of templates actually stored for the entry.
    reduced: stored count is below the full 2^m over the event type's
        m other inventory roles, i.e. the entry does not cover every
        subset the inventory would allow.
    """

    expected: int
    stored: int
    reduced: bool


class TemplateRegistry:
    """Validated, ordered view of event types and their template entries."""

    def __init__(
        self,
        event_types: Iterable[EventTypeDef],
        templates: Iterable[DynamicTemplate],
    ) -> None:
        self._event_types: dict[str, EventTypeDef] = {}
        for et in event_types:
            if et.name in self._event_types:
                raise RegistryError(f"duplicate event type {et.name!r}")
            if len(set(et.roles)) != len(et.roles):
                raise RegistryError(f"event type {et.name!r} has duplicate roles")
            self._event_types[et.name] = et

        self._entries: dict[tuple[str, str], list[DynamicTemplate]] = {}
        for tpl in templates:
            self._validate_template(tpl)
            self._entries.setdefault((tpl.event_type, tpl.target_role), []).append(tpl)
        for key, entry in self._entries.items():
            self._validate_entry(key, entry)

    def _validate_template(self, tpl: DynamicTemplate) -> None:
        where = f"({tpl.event_type}, {tpl.target_role})"
        et = self._event_types.get(tpl.event_type)
        if et is None:
            raise RegistryError(f"{where}: unknown event type")
        if tpl.target_role not in et.roles:
            raise RegistryError(f"{where}: target role not in event type inventory")
        if tpl.target_role in tpl.slots:
            raise RegistryError(f"{where}: target role appears in its own slots")
        if len(set(tpl.slots)) != len(tpl.slots):
            raise RegistryError(f"{where}: duplicate slot role in {tpl.slots}")
        for slot in tpl.slots:
            if slot not in et.roles:
                raise RegistryError(f"{where}: slot role {slot!r} not in inventory")
        if not tpl.text.endswith("?"):
            raise RegistryError(f"{where}: template text must end with '?': {tpl.text!r}")
        found = tpl.placeholders()
        if sorted(found) != sorted(tpl.slots):
            raise RegistryError(
                f"{where}: placeholders {found} do not match slots {list(tpl.slots)}"
                f" in {tpl.text!r}"
            )

    def _validate_entry(self, key: tuple[str, str], entry: list[DynamicTemplate]) -> None:
        where = f"({key[0]}, {key[1]})"
        seen: set[frozenset[str]] = set()
        for index, tpl in enumerate(entry):
            slot_set = frozenset(tpl.slots)
            if slot_set in seen:
                raise RegistryError(
                    f"{where}: template {index} repeats slot set {set(slot_set) or '{}'}"
                )
            seen.add(slot_set)
        if frozenset() not in seen:
            raise RegistryError(f"{where}: entry has no base template")
        if entry[0].slots:
            raise RegistryError(f"{where}: base template must come first")

    @property
    def event_types(self) -> tuple[EventTypeDef, ...]:
        return tuple(self._event_types.values())

    def has_event_type(self, name: str) -> bool:
        return name in self._event_types

    def roles_for(self, event_type: str) -> tuple[str, ...]:
        try:
            return self._event_types[event_type].roles
        except KeyError:
            raise RegistryError(f"unknown event type {event_type!r}") from None

    def has_entry(self, event_type: str, target_role: str) -> bool:
        return (event_type, target_role) in self._entries

    def entry_keys(self) -> list[tuple[str, str]]:
        return list(self._entries.keys())

    def templates_for(self, event_type: str, target_role: str) -> tuple[DynamicTemplate, ...]:
        """All templates for the entry, in registry (source-file) order."""
        try:
            return tuple(self._entries[(event_type, target_role)])
        except KeyError:
            raise RegistryError(f"no templates for ({event_type}, {target_role})") from None


def templates_for(
    registry: TemplateRegistry, event_type: str, target_role: str
) -> tuple[DynamicTemplate, ...]:
    return registry.templates_for(event_type, target_role)


def expected_template_count(
    registry: TemplateRegistry, event_type: str, target_role: str
) -> TemplateCount:
    """Count check for one entry: 2^k over its k slotted roles.

    An entry is flagged reduced when its stored count falls short of the
    full subset lattice over the event type's other inventory roles.
    """
    entry = registry.templates_for(event_type, target_role)
    slotted: set[str] = set()
    for tpl in entry:
        slotted.update(tpl.slots)
    other = [r for r in registry.roles_for(event_type) if r != target_role]
    expected = 2 ** len(slotted)
    return TemplateCount(
        expected=expected,
        stored=len(entry),
        reduced=len(entry) < 2 ** len(other),
    )


def load_registry(path: str) -> TemplateRegistry:
    """Load and validate a registry JSON file.

    Schema: {"event_types": [{"name", "roles"}],
             "templates": [{"event_type", "target_role", "slots", "text"}]}.
    Template order within an entry follows file order; validation errors
    name the offending (event type, role) entry.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise RegistryError(f"cannot read registry {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise RegistryError(f"registry {path} is not valid JSON: {exc}") from exc

    if not isinstance(data, dict) or "event_types" not in data or "templates" not in data:
        raise RegistryError(f"registry {path} must have event_types and templates")

    event_types = []
    for obj in data["event_types"]:
        try:
            event_types.append(EventTypeDef(name=obj["name"], roles=tuple(obj["roles"])))
        except (KeyError, TypeError) as exc:
            raise RegistryError(f"bad event type record {obj!r}: {exc}") from exc

    templates = []
    for obj in data["templates"]:
        try:
            templates.append(
                DynamicTemplate(
                    event_type=obj["event_type"],
                    target_role=obj["target_role"],
                    slots=tuple(obj["slots"]),
                    text=obj["text"],
                )
            )
        except (KeyError, TypeError) as exc:
            raise RegistryError(f"bad template record {obj!r}: {exc}") from exc

    return TemplateRegistry(event_types, templates)
