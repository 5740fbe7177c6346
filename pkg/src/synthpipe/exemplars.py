"""In-context exemplar pool: notes for one-shot, note-dialogue pairs for few-shot.

The built-in pool holds three fully synthetic placeholder pairs so the
engine runs out of the box; for production generation point
:meth:`ExemplarPool.from_dir` at a directory of real pairs (e.g. a
dialogue-note benchmark training split) laid out as ``<name>.note.txt``
plus ``<name>.dialogue.txt``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import ValidationError


@dataclass(frozen=True)
class Exemplar:
    name: str
    note: str
    dialogue: str | None = None


class ExemplarPool:
    """Uniform, seedable sampling over a fixed set of exemplars."""

    def __init__(self, exemplars: Sequence[Exemplar]):
        if not exemplars:
            raise ValidationError("exemplar pool must not be empty")
        self._exemplars = tuple(sorted(exemplars, key=lambda e: e.name))
        self._paired = tuple(e for e in self._exemplars if e.dialogue is not None)

    def __len__(self) -> int:
        return len(self._exemplars)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self._exemplars)

    @classmethod
    def from_dir(cls, path: str | Path) -> "ExemplarPool":
        """Load ``<name>.note.txt`` (+ optional ``<name>.dialogue.txt``) files."""
        directory = Path(path)
        exemplars = []
        for note_file in sorted(directory.glob("*.note.txt")):
            name = note_file.name[: -len(".note.txt")]
            dialogue_file = directory / f"{name}.dialogue.txt"
            exemplars.append(
                Exemplar(
                    name=name,
                    note=note_file.read_text(encoding="utf-8"),
                    dialogue=(
                        dialogue_file.read_text(encoding="utf-8")
                        if dialogue_file.exists()
                        else None
                    ),
                )
            )
        if not exemplars:
            raise ValidationError(f"no *.note.txt exemplars found under {directory}")
        return cls(exemplars)

    @classmethod
    def builtin(cls) -> "ExemplarPool":
        return cls(DEFAULT_EXEMPLARS)

    def sample_note(self, rng: random.Random) -> tuple[str, str]:
        """One (name, note text) drawn uniformly."""
        exemplar = rng.choice(self._exemplars)
        return exemplar.name, exemplar.note

    def sample_pairs(self, rng: random.Random, k: int = 3) -> list[tuple[str, tuple[str, str]]]:
        """``k`` distinct (name, (note, dialogue)) pairs drawn uniformly."""
        if len(self._paired) < k:
            raise ValidationError(
                f"need {k} note-dialogue exemplar pairs, pool has {len(self._paired)}"
            )
        chosen = rng.sample(self._paired, k)
        return [(e.name, (e.note, e.dialogue)) for e in chosen]


_NOTE_HYPERTENSION = """SUBJECTIVE

Chief Complaint (CC):
Follow-up for high blood pressure.

History of Present Illness (HPI):
Walter Briggs is a 58-year-old male returning for routine follow-up of essential hypertension, diagnosed two years ago. He reports good adherence to lisinopril 20 mg daily and denies headaches, chest pain, or visual changes. Home readings average 138/86.

OBJECTIVE

Vital Signs: BP 142/88, HR 74, afebrile.
Physical Examination: Regular heart rate and rhythm, no murmurs. Lungs clear to auscultation. No peripheral edema.

ASSESSMENT

Essential hypertension, suboptimally controlled on current monotherapy.

PLAN

Increase lisinopril to 40 mg orally once daily, 90 tablets dispensed.
Order basic metabolic panel to check renal function and electrolytes in two weeks.
Counsel on reduced sodium intake and 30 minutes of walking five days per week.
Follow up in three months with home blood pressure log.
"""

_DIALOGUE_HYPERTENSION = """[doctor]: Good morning, Walter. How have you been since your last visit?
[patient]: Morning, Doctor. Pretty well, I think. I've been taking the pill every day like you said.
[doctor]: Glad to hear it. Any headaches, chest pain, or problems with your vision?
[patient]: No, nothing like that.
[doctor]: What have your home readings been running?
[patient]: Mostly around 138 over 86, give or take.
[doctor]: Okay. Today in the office you're at 142 over 88, so we're a little above where I'd like you.
[patient]: Hmm, that's higher than I hoped.
[doctor]: It's not dramatic, but I'd like to increase the lisinopril from 20 to 40 milligrams once a day.
[patient]: Okay, that's fine with me.
[doctor]: I'll also order a basic metabolic panel in two weeks to keep an eye on your kidneys and electrolytes with the higher dose.
[patient]: Sure, I can come in for the blood draw.
[doctor]: And keep working on the salt, plus a 30-minute walk five days a week if you can manage it.
[patient]: I'll do my best with the walking.
[doctor]: Great. Bring your blood pressure log and I'll see you in three months.
[patient]: Will do. Thanks, Doctor.
"""

_NOTE_ANKLE = """SUBJECTIVE

Dana Whitfield is a 24-year-old female presenting with right ankle pain after twisting it during a soccer match yesterday evening. She describes moderate lateral pain, worse with weight bearing, and mild swelling. No numbness or tingling. Ibuprofen provided partial relief. No prior ankle injuries.

OBJECTIVE

Vital Signs: Within normal limits.
Physical Examination: Moderate swelling and tenderness over the right lateral malleolus. No bony tenderness at the posterior edge. Able to bear weight for four steps with discomfort. Sensation and pulses intact.
X-ray right ankle, three views: no acute fracture.

ASSESSMENT

Right lateral ankle sprain, grade II. Fracture excluded radiographically.

PLAN

Rest, ice, compression wrap, and elevation for the first 72 hours.
Ibuprofen 400 mg orally every six hours as needed with food, 30 tablets.
Air stirrup ankle brace with weight bearing as tolerated.
Referral to physical therapist Dr. Marcus Lee for a six-session strengthening program, for restoration of range of motion and ankle stability.
Return if pain worsens or fails to improve within two weeks.
"""

_DIALOGUE_ANKLE = """[doctor]: Hi Dana, I hear you had a rough soccer game. What happened?
[patient]: Yeah, I went for the ball and rolled my right ankle. It hurt right away.
[doctor]: When was that?
[patient]: Yesterday evening, around seven.
[doctor]: Where does it hurt the most?
[patient]: On the outside of the ankle. It's swollen and putting weight on it stings.
[doctor]: Any numbness or tingling in the foot?
[patient]: No, just the pain.
[doctor]: Did anything help overnight?
[patient]: I took some ibuprofen, that took the edge off.
[doctor]: Let me take a look. Okay, there's moderate swelling over the outside ankle bone, and you're tender there, but the back edge of the bone feels fine. Can you take a few steps for me?
[patient]: Ouch. Yeah, I can walk, it just hurts.
[doctor]: Good. The X-ray we took shows no fracture, so this is a grade two lateral ankle sprain.
[patient]: Okay, that's a relief it's not broken.
[doctor]: For the next three days: rest, ice, a compression wrap, and keep it elevated. I'll give you ibuprofen, 400 milligrams every six hours as needed, with food.
[patient]: Got it.
[doctor]: You'll also get an air stirrup brace, and you can put weight on it as tolerated. I'm referring you to Dr. Marcus Lee, a physical therapist, for six sessions to rebuild strength and stability.
[patient]: Okay, I'll set that up.
[doctor]: If the pain gets worse or isn't improving in two weeks, come back and we'll take another look.
[patient]: Will do. Thanks so much.
"""

_NOTE_GERD = """SUBJECTIVE

Chief Complaint (CC):
Burning sensation in the chest after meals.

History of Present Illness (HPI):
Priya Raman is a 41-year-old female reporting three months of burning retrosternal discomfort after large or late meals, with occasional sour taste in the mouth at night. Symptoms occur three to four times per week. No dysphagia, weight loss, or vomiting. Antacids give short-lived relief. She drinks two coffees daily and eats dinner late most evenings.

OBJECTIVE

Vital Signs: BP 118/76, HR 70, BMI 27.
Physical Examination: Abdomen soft, non-tender, no masses. No epigastric guarding.

ASSESSMENT

Gastro-esophageal reflux disease without alarm features.

PLAN

Omeprazole 20 mg orally once daily before breakfast for eight weeks, 56 capsules.
Lifestyle counselling: earlier dinners, smaller portions, reduce evening coffee, elevate head of bed.
Return in eight weeks; escalate to endoscopy referral if symptoms persist or alarm features develop.
"""

_DIALOGUE_GERD = """[doctor]: Hello Priya, what brings you in today?
[patient]: Hi, Doctor. I keep getting this burning feeling in my chest after I eat, mostly after big dinners.
[doctor]: How long has that been going on?
[patient]: About three months now.
[doctor]: How often would you say it happens?
[patient]: Maybe three or four times a week. Some nights I wake up with a sour taste in my mouth.
[doctor]: Any trouble swallowing, weight loss, or vomiting?
[patient]: No, none of that.
[doctor]: Do antacids help?
[patient]: A little, but it comes back pretty fast.
[doctor]: Tell me about your evenings — when do you usually eat dinner?
[patient]: Pretty late, honestly. Around nine. And I do drink a couple of coffees a day.
[doctor]: Okay. Your exam is reassuring — your belly is soft and not tender. This fits gastro-esophageal reflux without any alarm features.
[patient]: Okay, so what do we do about it?
[doctor]: I'll start you on omeprazole, 20 milligrams once a day before breakfast, for eight weeks.
[patient]: Alright, I can do that.
[doctor]: Just as important: earlier and smaller dinners, cut the evening coffee, and raise the head of your bed a bit.
[patient]: Hmm, the late dinners will be the hard part, but I'll try.
[doctor]: If you're not clearly better in eight weeks, we'll talk about a camera test of the stomach. Sound good?
[patient]: Sounds good. Thank you, Doctor.
"""

DEFAULT_EXEMPLARS = (
    Exemplar(name="placeholder-ankle", note=_NOTE_ANKLE, dialogue=_DIALOGUE_ANKLE),
    Exemplar(name="placeholder-gerd", note=_NOTE_GERD, dialogue=_DIALOGUE_GERD),
    Exemplar(
        name="placeholder-hypertension",
        note=_NOTE_HYPERTENSION,
        dialogue=_DIALOGUE_HYPERTENSION,
    ),
)
