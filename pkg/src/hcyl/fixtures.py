"""Named presentations used by the CLI and the tests."""
from __future__ import annotations

from .cylinder import (AdmissiblePresentation, WirtingerLink, from_mapping_class,
                       from_string_link, handle_twist, stack, tau_zeta, trivial)
from .fileformats import parse_word


def _words(texts, genus, aux):
    return tuple(parse_word(t, genus, aux) for t in texts)


def TRIVIAL(g: int = 1) -> AdmissiblePresentation:
    return trivial(g)


def TAU_ZETA() -> AdmissiblePresentation:
    """Mapping cylinder of the boundary twist at genus 1."""
    return from_mapping_class(tau_zeta(1))


def TAU_ZETA_EMBEDDED() -> AdmissiblePresentation:
    """Genus 2: the boundary twist of the first handle."""
    return from_mapping_class(handle_twist(2, 1))


EG4_RELATORS = (
    "ip1 im3^-1 ip4 im1^-1",
    "ip1 ip3 ip1^-1 ip3^-1 ip2 z1 im2^-1 im3 im1 im3^-1 im1^-1",
    "ip4 im3 ip4^-1 z1^-1",
    "im3 ip3^-1 im3^-1 z1",
    "im4 z1^-1 ip4^-1 z1",
)


def EG4() -> AdmissiblePresentation:
    """A two-strand pure string link in genus 2 with one extra arc,
    blackboard framed."""
    return AdmissiblePresentation(2, 1, _words(EG4_RELATORS, 2, 1))


def EG4_LINK() -> WirtingerLink:
    return WirtingerLink(2, 1, _words(EG4_RELATORS[2:], 2, 1))


def STRINGLINK_TRIVIAL_LINK(g: int = 2) -> WirtingerLink:
    rels = [f"ip{g + j} im{g + j}^-1" for j in range(1, g + 1)]
    return WirtingerLink(g, 0, _words(rels, g, 0))


def STRINGLINK_TRIVIAL(g: int = 2) -> AdmissiblePresentation:
    return from_string_link(STRINGLINK_TRIVIAL_LINK(g))


def TREFOIL_KNOT_LINK() -> WirtingerLink:
    """Long trefoil in genus 1: arcs im2 -> z1 -> z2 -> ip2, framed so the
    longitude is null-homologous (the blackboard writhe is -3)."""
    rels = [
        "z2 im2 z2^-1 z1^-1",
        "im2 z1 im2^-1 z2^-1",
        "z1 z2 z1^-1 ip2^-1",
    ]
    return WirtingerLink(1, 2, _words(rels, 1, 2), framing=(3,))


def TREFOIL_KNOT() -> AdmissiblePresentation:
    return from_string_link(TREFOIL_KNOT_LINK())


def TREFOIL_TWISTED() -> AdmissiblePresentation:
    """The boundary twist stacked on the trefoil string knot: sigma_2 stays
    trivial while both the torsion and the Magnus part are nonzero."""
    return stack(TAU_ZETA(), TREFOIL_KNOT())


PRESETS = {
    "trivial": TRIVIAL,
    "tau_zeta": TAU_ZETA,
    "tau_zeta_embedded": TAU_ZETA_EMBEDDED,
    "eg4": EG4,
    "stringlink_trivial": STRINGLINK_TRIVIAL,
    "trefoil_knot": TREFOIL_KNOT,
    "trefoil_twisted": TREFOIL_TWISTED,
}

GENUS_PRESETS = {"trivial", "stringlink_trivial"}


def preset(name: str, genus: int | None = None) -> AdmissiblePresentation:
    key = name.lower().replace("-", "_")
    if key not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}")
    if key in GENUS_PRESETS:
        return PRESETS[key](genus if genus is not None else (1 if key == "trivial" else 2))
    if genus is not None and genus != preset(key).genus:
        raise ValueError(f"preset {name!r} has fixed genus")
    return PRESETS[key]()
