"""Coarse POS tagging onto {NOUN, VERB, ADJ, OTHER}.

A lexicon-and-suffix tagger: closed-class words (pronouns, determiners,
prepositions, conjunctions, interjections, common adverbs) map to OTHER,
frequent verb forms and verbal suffixes to VERB, adjectival suffixes and
frequent adjectives to ADJ, and remaining content words default to NOUN,
the open class. Auxiliaries count as verbs, matching Penn-style coarse
mappings.

This stands in for an off-the-shelf tagger pipeline so the redundancy-rule
baseline stays runnable offline; only the four-way coarse distinction the
rule consumes is attempted.
"""

from __future__ import annotations

import json
from pathlib import Path

from .corpus_io import DialogueRecord, load_corpus

_PRONOUNS = """
i you he she it we they me him her us them my your his its our their mine
yours hers ours theirs myself yourself himself herself itself ourselves
yourselves themselves this that these those who whom whose which what
someone anyone everyone somebody anybody everybody nobody something
anything everything nothing
""".split()

_DETERMINERS = """
a an the some any no every each either neither both all half several many
much few little more most less least enough such own same other another
""".split()

_PREPOSITIONS = """
in on at by for with about against between into through during before after
above below to from up down out off over under again further of near across
behind beyond within without along around upon toward towards onto via per
""".split()

_CONJUNCTIONS = "and but or nor so yet although because since unless while whereas if then than as when where how why not".split()

_INTERJECTIONS = """
ok okay yes yeah yep no nope hi hello hey bye goodbye thanks thank please
hmm uh um oh ooh ah aha wow huh hm well anyway btw lol omg
""".split()

_ADVERBS = """
very too also just still already soon often never always sometimes usually
here there now today tomorrow tonight yesterday maybe perhaps quite rather
almost really only even again once twice away back together instead
""".split()

_OTHER_WORDS = frozenset(
    _PRONOUNS + _DETERMINERS + _PREPOSITIONS + _CONJUNCTIONS + _INTERJECTIONS
    + _ADVERBS
)

_VERBS = frozenset(
    """
    be am is are was were been being have has had having do does did doing
    done will would shall should can could may might must ought need dare
    go goes going went gone say says said saying get gets got getting gotten
    make makes made making take takes took taking taken come comes came
    coming see sees saw seeing seen know knows knew knowing known think
    thinks thought thinking tell tells told telling ask asks asked asking
    find finds found finding give gives gave giving given leave leaves left
    leaving feel feels felt feeling put puts putting bring brings brought
    bringing keep keeps kept keeping let lets letting begin begins began
    beginning write writes wrote writing written run runs ran running meet
    meets met meeting pay pays paid paying send sends sent sending hear
    hears heard hearing stand stands stood standing sit sits sat sitting
    lose loses lost losing buy buys bought buying speak speaks spoke
    speaking read reads reading win wins won winning break breaks broke
    breaking eat eats ate eating drink drinks drank drinking sleep sleeps
    slept sleeping drive drives drove driving wear wears wore wearing choose
    chooses chose choosing want wants like likes love loves need needs try
    tries call calls work works look looks use uses help helps talk talks
    seem seems turn turns start starts show shows play plays move moves
    live lives believe believes happen happens wait waits stay stays check
    checks
    """.split()
)

_ADJECTIVES = frozenset(
    """
    good bad big small new old young long short high low nice great happy
    sad easy hard early late important different possible available busy
    free sorry glad fine cool awesome amazing beautiful pretty ugly cheap
    expensive hot cold warm best better worst worse favorite favourite funny
    serious sweet tired hungry ready sick angry afraid sure
    """.split()
)

_VERB_SUFFIXES = ("ize", "ise", "ify")
_ADJ_SUFFIXES = ("ous", "ful", "ive", "able", "ible", "less", "ish")

NOUN, VERB, ADJ, OTHER = "NOUN", "VERB", "ADJ", "OTHER"


def tag_word(word: str) -> str:
    core = word.strip("'\".,!?;:()[]{}<>-_*~").lower()
    if not core or not any(ch.isalpha() for ch in core):
        return OTHER
    if core in _VERBS:
        return VERB
    if core in _ADJECTIVES:
        return ADJ
    if core in _OTHER_WORDS:
        return OTHER
    if core.endswith("ly"):
        return OTHER
    if core.endswith(_VERB_SUFFIXES):
        return VERB
    if len(core) >= 5 and core.endswith(("ing", "ed")):
        return VERB
    if core.endswith(_ADJ_SUFFIXES):
        return ADJ
    return NOUN


def tag_dialogue(record: DialogueRecord) -> dict:
    tags = [[tag_word(w) for w in words] for words in record.utterances]
    for words, row in zip(record.utterances, tags):
        if len(words) != len(row):
            raise RuntimeError(f"{record.id}: tag/word count mismatch")
    return {"id": record.id, "tags": tags}


def pos_tag_corpus(corpus_path, output_path) -> int:
    records = load_corpus(corpus_path)
    with Path(output_path).open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(tag_dialogue(record)))
            fh.write("\n")
    return 0
