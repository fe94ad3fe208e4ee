#!/usr/bin/env python3
# Copyright 2026 The Narrative Miner Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

# Regenerates the Iraq War project fixture: corpus, manifest, mock LLM script,
# and embedding table. Output is deterministic.

import json
import os

HERE = os.path.dirname(os.path.abspath(__file__))
EVENT = "Iraq War"

# Event axes. Each viewpoint phrases a shared event differently; all phrasings
# lean on the event's axis and differ on a private one.
AXES = ["9/11", "invasion", "abu-ghraib", "surge", "withdrawal", "dossier",
        "hutton", "basra", "powell", "uranium", "gulf-1991", "baghdad",
        "mission", "phantom"]

# (axis, time, label variants, synthesized label) per viewpoint.
EVENTS = {
    "US": {
        "9/11": ("2001-09-11", ["September 11 Attacks", "Al-Qaeda Attacks on New York and Washington"],
                 "September 11 Attacks"),
        "invasion": ("2003-03-20", ["Operation Iraqi Freedom Begins", "Coalition Invasion of Iraq"],
                     "Operation Iraqi Freedom"),
        "abu-ghraib": ("2004-04-28", ["Abu Ghraib Photos Published", "Abu Ghraib Prisoner Abuse Revealed"],
                       "Abu Ghraib Prisoner Abuse"),
        "surge": ("2007-01-10", ["Troop Surge Announced", "Bush Orders Troop Surge"],
                  "Troop Surge"),
        "withdrawal": ("2011-12-18", ["Last US Troops Leave Iraq", "Withdrawal of US Forces from Iraq"],
                       "Withdrawal of US Forces"),
    },
    "UK": {
        "dossier": ("2002-09-24", ["Iraq Weapons Dossier Published", "Government Dossier on Iraqi Weapons"],
                    "September Dossier"),
        "invasion": ("2003-03-20", ["British Troops Join Invasion of Iraq", "Invasion of Iraq"],
                     "Invasion of Iraq"),
        "hutton": ("2004-01-28", ["Hutton Inquiry Report", "Hutton Report Clears Government"],
                   "Hutton Inquiry"),
        "abu-ghraib": ("2004-04-28", ["Abu Ghraib Abuse Images Emerge", "Abu Ghraib Scandal"],
                       "Abu Ghraib Scandal"),
        "basra": ("2007-12-16", ["Basra Handed to Iraqi Control", "British Handover of Basra"],
                  "Handover of Basra"),
    },
    "RU": {
        "powell": ("2003-02-05", ["Powell Presents Evidence at UN", "Powell Vial Speech at Security Council"],
                   "Powell Presentation to the UN Security Council"),
        "invasion": ("2003-03-20", ["US Aggression Against Iraq Begins", "American Invasion of Iraq"],
                     "US-led Aggression Against Iraq"),
        "abu-ghraib": ("2004-04-28", ["Torture at Abu Ghraib Exposed", "Abu Ghraib Torture Scandal"],
                       "Abu Ghraib Torture"),
        "uranium": ("2004-11", ["Depleted Uranium Used in Fallujah", "Depleted Uranium Contamination"],
                    "Depleted Uranium Contamination"),
    },
}

# Sentence templates per axis; the doc index picks the label variant.
SENTENCES = {
    "9/11": "On 11 September 2001 hijacked airliners struck the World Trade Center and the Pentagon.",
    "invasion": "On 20 March 2003 ground forces crossed from Kuwait into southern Iraq.",
    "abu-ghraib": "On 28 April 2004 photographs of detainees mistreated at Abu Ghraib prison were broadcast.",
    "surge": "On 10 January 2007 the president announced that more than twenty thousand additional troops would deploy.",
    "withdrawal": "On 18 December 2011 the final convoy of American soldiers crossed into Kuwait.",
    "dossier": "On 24 September 2002 Downing Street released a dossier on Iraqi weapons programmes.",
    "hutton": "On 28 January 2004 Lord Hutton published his report on the death of David Kelly.",
    "basra": "On 16 December 2007 British commanders transferred Basra province to Iraqi authorities.",
    "powell": "On 5 February 2003 Colin Powell held up a vial before the Security Council.",
    "uranium": "In November 2004 doctors in Fallujah reported contamination from depleted uranium shells.",
    "gulf-1991": "The 1991 Gulf War had already left the country under sanctions.",
    "phantom": "Several commentators speculated about a secret peace conference.",
}

LEADS = {
    "US": ["Our correspondents confirmed that", "Records show that"],
    "UK": ["It was widely reported that", "As this newspaper noted,"],
    "RU": ["Observers in Moscow noted that", "It is now accepted that"],
}


def sentence_for(vp, axis, variant):
    s = SENTENCES[axis]
    return f"{LEADS[vp][variant]} {s[0].lower()}{s[1:]}"


# url suffix, viewpoint, outlet, title, axes mentioned (variant index by position).
DOCS = [
    ("us-1", "US", "Capitol Ledger", "Ten years on", ["9/11", "invasion", "abu-ghraib", "surge"]),
    ("us-2", "US", "Capitol Ledger", "The road to Baghdad", ["9/11", "invasion", "surge"]),
    ("us-3", "US", "Prairie Courier", "An occupation reconsidered", ["invasion", "abu-ghraib", "withdrawal"]),
    ("us-4", "US", "Prairie Courier", "Coming home", ["9/11", "abu-ghraib", "withdrawal"]),
    ("us-5", "US", "Prairie Courier", "Storm season", []),
    ("uk-1", "UK", "Thames Review", "Making the case for war", ["dossier", "invasion", "hutton"]),
    ("uk-2", "UK", "Thames Review", "Southern Iraq", ["invasion", "abu-ghraib", "basra"]),
    ("uk-3", "UK", "Northern Standard", "Trust and the dossier", ["dossier", "hutton", "abu-ghraib"]),
    ("uk-4", "UK", "Northern Standard", "Leaving Basra", ["gulf-1991", "invasion", "basra"]),
    ("ru-1", "RU", "Moscow Herald", "A war built on a vial", ["powell", "invasion", "uranium"]),
    ("ru-2", "RU", "Moscow Herald", "Pretexts", ["powell", "invasion", "abu-ghraib"]),
    ("ru-3", "RU", "Volga Gazette", "Occupation without end", ["invasion", "abu-ghraib", "uranium"]),
    ("ru-4", "RU", "Volga Gazette", "Legacy of Fallujah", ["powell", "uranium", "phantom"]),
]

# Subevents of the US invasion, found in two documents.
SUBEVENTS = [
    ("baghdad", "2003-04-09", ["Fall of Baghdad", "Saddam Statue Toppled in Baghdad"], "Fall of Baghdad",
     "On 9 April 2003 marines helped pull down the statue in Firdos Square."),
    ("mission", "2003-05-01", ["Mission Accomplished Speech", "Bush Declares End of Major Combat"],
     "Mission Accomplished Speech",
     "On 1 May 2003 the president spoke aboard an aircraft carrier beneath a banner."),
]
SUBEVENT_DOCS = ["us-1", "us-2"]

FILLER = {
    "US": [
        "Veterans interviewed for this piece described long rotations and uncertain goals.",
        "Congressional hearings returned again and again to the question of cost.",
        "Polling on the war shifted sharply after the second year of occupation.",
        "Officials who served in the provisional authority still disagree about disbanding the army.",
        "Reconstruction contracts became a political issue in several election cycles.",
        "Families in small towns organised vigils whenever a local soldier died.",
        "Military historians continue to debate whether the early plan was ever realistic.",
        "Budget analysts put the long-term cost well above initial estimates.",
    ],
    "UK": [
        "Parliament held a long and bitter debate before the vote on military action.",
        "Hundreds of thousands marched through London in opposition to the war.",
        "Questions about the legal advice given to ministers never quite went away.",
        "Regimental histories record the heat, the dust and the boredom of patrols.",
        "Later inquiries examined how intelligence had been presented to the public.",
        "Relations between Downing Street and the BBC remained strained for years.",
        "The public mood soured as the deployment stretched on without a clear end.",
        "Several ministers resigned over the decision to go to war.",
    ],
    "RU": [
        "Moscow argued from the outset that the war lacked a mandate from the Security Council.",
        "Diplomats recalled how allies in Europe had also opposed the operation.",
        "Commentators drew parallels with the earlier bombing of Yugoslavia.",
        "Oil markets reacted nervously to every stage of the conflict.",
        "The promised weapons of mass destruction were never found.",
        "Regional experts warned that the occupation would strengthen militant groups.",
        "Civilian casualty figures were disputed by every side involved.",
        "International lawyers questioned the justification offered for the invasion.",
    ],
}


def label_answer(label, time):
    return f"{label} ({time})"


def build_body(vp, index, title, sentences):
    filler = FILLER[vp]
    parts = []
    k = index
    for s in sentences:
        parts.append(s)
        parts.append(filler[k % len(filler)])
        k += 1
    body = " ".join(parts)
    while len(body) < 1200:
        body += " " + filler[k % len(filler)]
        k += 1
    return title + "\n\n" + body + "\n"


def main():
    dim = len(AXES)
    vectors = {}
    private = []

    def private_axis(text):
        private.append(text)
        return dim + len(private) - 1

    def lean(axis, text, weight=0.95):
        vectors[text] = (axis, weight, private_axis(text))

    script = {"model": "mock-iraq", "responses": {
        "detect_event": {}, "detect_subevent": {}, "extract_timeline": {},
        "label_event": {}, "verify_event": {}, "synthesize_label": {},
        "infer_relation": {}}}
    r = script["responses"]

    corpus_dir = os.path.join(HERE, "corpus")
    os.makedirs(corpus_dir, exist_ok=True)
    manifest = []
    mentions = {}  # (vp, axis) -> labels used
    for i, (slug, vp, outlet, title, axes) in enumerate(DOCS):
        url = f"https://{vp.lower()}.example/{slug}"
        sentences = []
        for j, axis in enumerate(axes):
            variant = (i + j) % 2
            sentence = sentence_for(vp, axis, variant)
            sentences.append(sentence)
            if axis == "gulf-1991":
                r["label_event"][sentence] = label_answer("Gulf War", "1991")
                continue
            if axis == "phantom":
                r["label_event"][sentence] = label_answer("Secret Peace Conference", "2005")
                r["verify_event"][f"{url} || Secret Peace Conference"] = "no"
                continue
            time, variants, _ = EVENTS[vp][axis]
            label = variants[variant]
            r["label_event"][sentence] = label_answer(label, time)
            mentions.setdefault((vp, axis), set()).add(label)
        if slug in SUBEVENT_DOCS:
            for _, time, variants, _, sentence in SUBEVENTS:
                sentences.append(sentence)
        body = build_body(vp, i, title, sentences)
        path = os.path.join(corpus_dir, slug + ".txt")
        with open(path, "w") as f:
            f.write(body)
        manifest.append({"path": f"corpus/{slug}.txt", "viewpoint": vp,
                         "outlet": outlet, "url": url})
        if axes:
            r["detect_event"][f"{url} || {EVENT}"] = "yes"
            items = [s for s in sentences if s not in [x[4] for x in SUBEVENTS]]
            r["extract_timeline"][f"{url} || {EVENT}"] = "\n".join(
                f"{n + 1}. {s}" for n, s in enumerate(items))

    for (vp, axis), labels in sorted(mentions.items()):
        for label in sorted(labels):
            lean(AXES.index(axis), label)
        synth = EVENTS[vp][axis][2]
        if len(labels) > 1:
            r["synthesize_label"][" || ".join(sorted(labels))] = synth
            if synth not in vectors:
                lean(AXES.index(axis), synth)
    for text in ["Gulf War", "Secret Peace Conference"]:
        lean(AXES.index("gulf-1991" if text == "Gulf War" else "phantom"), text)

    # Subevents of the US invasion narrative event.
    us_invasion = EVENTS["US"]["invasion"][2]
    for n, slug in enumerate(SUBEVENT_DOCS):
        url = f"https://us.example/{slug}"
        r["detect_subevent"][f"{url} || {us_invasion} || {EVENT}"] = "yes"
        lines = []
        for axis, time, variants, synth, sentence in SUBEVENTS:
            lines.append(f"- {sentence}")
        r["extract_timeline"][f"{url} || {us_invasion}"] = "\n".join(lines)
    for axis, time, variants, synth, sentence in SUBEVENTS:
        r["label_event"][sentence] = label_answer(variants[0], time)
        lean(AXES.index(axis), variants[0])

    # Relations between time-ordered neighbours, asked later-first.
    def chain(labels):
        for later, earlier in zip(labels[1:], labels[:-1]):
            r["infer_relation"][f"{later} || {earlier}"] = "A happened after B"

    def synthesized(vp, axis):
        labels = mentions[(vp, axis)]
        return EVENTS[vp][axis][2] if len(labels) > 1 else next(iter(labels))

    chain([synthesized("US", a) for a in ["9/11", "invasion", "abu-ghraib", "surge", "withdrawal"]])
    chain([synthesized("UK", a) for a in ["dossier", "invasion", "hutton", "abu-ghraib", "basra"]])
    # The RU documents never connect the UN presentation to the invasion.
    ru = [synthesized("RU", a) for a in ["powell", "invasion", "abu-ghraib", "uranium"]]
    r["infer_relation"][f"{ru[1]} || {ru[0]}"] = "none"
    chain(ru[1:])
    r["infer_relation"][f"{ru[3]} || {ru[2]}"] = "A caused by B"
    chain([variants[0] for _, _, variants, _, _ in SUBEVENTS])

    # Filter cases: too short, too long, excluded outlet.
    rejects = [
        ("us-short", "US", "Capitol Ledger", "Brief\n\n" + FILLER["US"][0] + "\n"),
        ("uk-long", "UK", "Thames Review",
         "Digest\n\n" + " ".join(FILLER["UK"] * 80) + "\n"),
        ("ru-blog", "RU", "Opinion Blog", build_body("RU", 0, "Rant", [sentence_for("RU", "powell", 0)])),
    ]
    for slug, vp, outlet, body in rejects:
        with open(os.path.join(corpus_dir, slug + ".txt"), "w") as f:
            f.write(body)
        manifest.append({"path": f"corpus/{slug}.txt", "viewpoint": vp, "outlet": outlet,
                         "url": f"https://{vp.lower()}.example/{'opinion-blog/' if slug == 'ru-blog' else ''}{slug}"})
    manifest.append({"exclude": "opinion-blog"})

    with open(os.path.join(HERE, "manifest.jsonl"), "w") as f:
        for m in manifest:
            f.write(json.dumps(m, sort_keys=True) + "\n")

    total = dim + len(private)
    table = {}
    for text, (axis, weight, own) in vectors.items():
        v = [0.0] * total
        v[axis] = weight
        v[own] = round((1 - weight * weight) ** 0.5, 6)
        table[text] = v
    with open(os.path.join(HERE, "embeddings.json"), "w") as f:
        json.dump(table, f, indent=1, sort_keys=True)
        f.write("\n")
    with open(os.path.join(HERE, "mock_script.json"), "w") as f:
        json.dump(script, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
