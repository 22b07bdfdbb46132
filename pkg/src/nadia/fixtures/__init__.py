"""Shipped fixtures: the Parax schema files and the "épouser" sample data.

The sample database holds the French entry "épouser" with three acceptions
on three axies, the German "heiraten" sharing the first axie, and Russian
entries indexed on that axie's gender sub-acceptions, which makes the
French-to-Russian translation go through contrastive labels.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Optional

from ..dls import parse_dls, resolve_schema
from ..dls.ast import DefaultDecl, RuleDecl
from ..dls.schema import Schema
from ..lexbase.store import Database, open_database
from ..rules import compile_default, compile_rule
from ..values import atom, fs, text


def _fixture_text(name: str) -> str:
    return resources.files("nadia.fixtures").joinpath(name).read_text(encoding="utf-8")


def parax_core_source() -> str:
    """The French-only Parax schema."""
    return _fixture_text("parax_core.dls")


def parax_mldb_source() -> str:
    """The four-language Parax schema with rules."""
    return _fixture_text("parax_mldb.dls")


def load_parax(location: Optional[str | Path] = None) -> Database:
    """Empty database over the four-language Parax schema."""
    decls = parse_dls(parax_mldb_source(), "parax_mldb.dls")
    schema = resolve_schema(decls)
    rules = [compile_rule(d, schema) for d in decls if isinstance(d, RuleDecl)]
    defaults = [compile_default(d, schema) for d in decls if isinstance(d, DefaultDecl)]
    return open_database(location, schema, rules=rules, defaults=defaults)


def build_figures_db(location: Optional[str | Path] = None) -> Database:
    """The sample database described above, built through transactions."""
    db = load_parax(location)

    epouser = db.create_entry("français", "épouser",
                              fs({"graphic-form": text("épouser"),
                                  "category": atom("vb")}))
    acc1 = db.add_acception(epouser, features=fs({"cat": atom("vb")}),
                            display_name="épouser_1")
    acc2 = db.add_acception(epouser, features=fs({"cat": atom("vb")}),
                            display_name="épouser_2")
    acc3 = db.add_acception(epouser, features=fs({"cat": atom("vb")}),
                            display_name="épouser_3")

    semarier = db.state.acceptions[acc1].axie_ref
    forme = db.state.acceptions[acc2].axie_ref
    idees = db.state.acceptions[acc3].axie_ref
    db.update_axie(semarier, mnemonic="#épouser_semarier",
                   gloss="prendre pour époux, épouse, se marier avec "
                         "(le prince épouse une cousette.)",
                   tags=("al", "an", "fr"))
    db.update_axie(forme, mnemonic="#épouser_forme",
                   gloss="s'adapter exactement à [une forme, un mouvement] "
                         "(robe qui épouse les formes du corps.)")
    db.update_axie(idees, mnemonic="#épouser_idées",
                   gloss="s'attacher de propos délibéré et avec ardeur à qqch "
                         "(épouser les idées, les intérêts de qqun.)")

    heiraten = db.create_entry("allemand", "heiraten",
                               fs({"graphic-form": text("heiraten"),
                                   "category": atom("vb")}))
    heiraten_1 = db.add_acception(heiraten, features=fs({"cat": atom("vb")}),
                                  display_name="heiraten_1")
    db.link_translation(acc1, heiraten_1)

    homme = db.make_sub_acception(semarier, "homme",
                                  gloss="se marier (pour un homme)",
                                  tags=("homme", "ru"),
                                  mnemonic="#épouser_semarier_homme")
    femme = db.make_sub_acception(semarier, "femme",
                                  gloss="se marier (pour une femme)",
                                  tags=("femme", "ru"),
                                  mnemonic="#épouser_semarier_femme")
    db.make_sub_acception(semarier, "relig",
                          tags=("relig", "an"),
                          mnemonic="#épouser_semarier_relig")

    zhenitsya = db.create_entry("russe", "жениться",
                                fs({"graphic-form": text("жениться"),
                                    "category": atom("vb")}))
    zh_1 = db.add_acception(zhenitsya, features=fs({"cat": atom("vb")}),
                            display_name="жениться_1")
    db.link_to_axie(zh_1, homme)

    zamuzh = db.create_entry("russe", "замуж (выйти - за)",
                             fs({"graphic-form": text("замуж (выйти - за)"),
                                 "category": atom("vb")}))
    za_1 = db.add_acception(zamuzh, features=fs({"cat": atom("vb")}),
                            display_name="замуж (выйти - за)_1")
    db.link_to_axie(za_1, femme)

    return db


def parax_schema() -> Schema:
    return resolve_schema(parse_dls(parax_mldb_source(), "parax_mldb.dls"))
