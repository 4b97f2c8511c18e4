#!/usr/bin/env python3
"""Rebuild the bundled reference demonstration store (60 entries).

Each entry is a worked refinement example: a task input, a deliberately
imperfect first explanation, reviewer feedback, a suggested explanation,
and the refined result. Twenty entries per task kind.

    python scripts/build_demo_store.py
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO_ROOT / "src"))

from crossrefine.prompting import Demonstration  # noqa: E402

OUT = REPO_ROOT / "src" / "crossrefine" / "data" / "demos" / "reference_store.jsonl"

# (input, initial, feedback, suggestion, refined, needs_further_refinement)
QA = [
    ("Question: Where would you borrow coffee if you do not have any?\nOptions:\n- convenience store\n- neighbor's house\n- coffee shop",
     "You would go to a convenience store because stores sell coffee.",
     "Borrowing is not buying; a store sells coffee rather than lending it, so the option does not fit the verb.",
     "Borrowing implies asking someone you know to lend you something, so the neighbor's house is the natural place.",
     "You borrow from people you know rather than businesses, so you would ask at a neighbor's house, while a store or coffee shop would sell the coffee instead.",
     True),
    ("Question: Where do students keep their textbooks during class?\nOptions:\n- backpack\n- desk\n- library",
     "Students keep textbooks in the library because libraries hold books.",
     "The question asks about during class; the library stores public books, not a student's own copy at their seat.",
     "During a lesson a student keeps the book within reach, which means on or inside the desk.",
     "During class a textbook stays within reach on the student's desk; the library only lends books and a backpack is where they travel, not where they are used.",
     True),
    ("Question: What do you use to protect your eyes while swimming?\nOptions:\n- goggles\n- sunglasses\n- towel",
     "Sunglasses protect the eyes, so a swimmer would wear sunglasses.",
     "Sunglasses shield against light, not water, and they fall off underwater.",
     "Goggles seal around the eyes and keep water out, which is what swimming requires.",
     "Goggles are made to seal around the eyes and keep water out, so swimmers wear goggles; sunglasses only block light and a towel is for drying off.",
     True),
    ("Question: Where would you find a pilot during a flight?\nOptions:\n- cockpit\n- cabin\n- runway",
     "A pilot works at the airport, so the pilot is on the runway.",
     "During a flight the aircraft is airborne; the runway is only used before takeoff and after landing.",
     "The pilot flies the plane from the cockpit while the flight is in progress.",
     "While the plane is in the air the pilot sits at the controls in the cockpit; the runway matters only for takeoff and landing, and passengers occupy the cabin.",
     True),
    ("Question: What do people typically do at a gym?\nOptions:\n- exercise\n- sleep\n- cook dinner",
     "People go to the gym to relax after work.",
     "Relaxing is vague and not among the options; the purpose of gym equipment is physical training.",
     "A gym exists for exercise, which is exactly one of the listed options.",
     "A gym is equipped for physical training, so people go there to exercise; sleeping and cooking happen at home.",
     True),
    ("Question: Where does milk go after grocery shopping?\nOptions:\n- refrigerator\n- bookshelf\n- garage",
     "Milk goes into the kitchen after shopping.",
     "The kitchen is a room, not one of the options, and the explanation skips why cooling matters.",
     "Milk spoils quickly at room temperature, so it belongs in the refrigerator.",
     "Milk spoils without cooling, so after shopping it goes straight into the refrigerator; the other options offer no cooling.",
     True),
    ("Question: What would you use to cut paper into shapes?\nOptions:\n- scissors\n- hammer\n- spoon",
     "You would use a knife because knives cut things.",
     "A knife is not among the options; the answer must come from the listed tools.",
     "Among the options, only scissors are made for cutting paper.",
     "Scissors are the only listed tool designed for cutting, so you would use scissors to cut paper into shapes.",
     True),
    ("Question: Where do you wait before boarding a train?\nOptions:\n- platform\n- ticket office\n- bridge",
     "People wait at the ticket office because that is where tickets are sold.",
     "Buying a ticket happens before waiting; boarding happens where the train stops.",
     "Trains stop alongside the platform, so passengers wait on the platform.",
     "Passengers wait on the platform because that is where the train doors open; the ticket office is only for buying tickets.",
     True),
    ("Question: What might you find in a toolbox?\nOptions:\n- wrench\n- pillow\n- sandwich",
     "A toolbox contains many items people need at home.",
     "Too generic: it never names an option or explains the elimination of the others.",
     "A wrench is a tool, and toolboxes store tools, unlike pillows or sandwiches.",
     "A toolbox stores tools, so a wrench belongs there; a pillow belongs to a bed and a sandwich to a lunchbox.",
     True),
    ("Question: Where would you plant a rose bush?\nOptions:\n- garden\n- freezer\n- drawer",
     "A rose bush should be planted in spring when it is warm.",
     "The question asks where, not when; the explanation never picks an option.",
     "Plants need soil and light, which a garden provides.",
     "A rose bush needs soil, light and room to grow, so it is planted in a garden; a freezer or a drawer offers none of these.",
     True),
    ("Question: What do you call the meal eaten in the morning?\nOptions:\n- breakfast\n- dinner\n- dessert",
     "The morning meal is dinner in some countries.",
     "Incorrect: dinner names the main evening meal in standard usage.",
     "The meal eaten in the morning is called breakfast.",
     "The first meal of the day, eaten in the morning, is breakfast; dinner comes in the evening and dessert is a course, not a meal.",
     True),
    ("Question: Where is a cashier most likely to work?\nOptions:\n- supermarket\n- forest\n- swimming pool",
     "A cashier handles money, so they can work anywhere money is used.",
     "Anywhere is not an answer; the options must be compared.",
     "Supermarkets have checkouts staffed by cashiers, unlike forests or pools.",
     "Cashiers staff checkouts, and of the options only a supermarket has checkouts, so a cashier most likely works in a supermarket.",
     True),
    ("Question: What instrument has black and white keys?\nOptions:\n- piano\n- violin\n- drum",
     "The violin is a classic instrument found in orchestras.",
     "True but irrelevant: the question asks about keys, which a violin lacks.",
     "A piano keyboard consists of black and white keys.",
     "A piano has a keyboard of black and white keys; violins have strings and drums have skins, so the answer is the piano.",
     True),
    ("Question: Where would you store ice cream at home?\nOptions:\n- freezer\n- cupboard\n- oven",
     "Ice cream should be eaten quickly so it does not melt.",
     "Eating it quickly dodges the question of storage.",
     "Ice cream stays frozen only in the freezer.",
     "Ice cream must stay below freezing to keep its texture, so at home it is stored in the freezer; a cupboard or an oven would melt it.",
     True),
    ("Question: What do bees produce?\nOptions:\n- honey\n- milk\n- wool",
     "Bees are important pollinators for many crops.",
     "Pollination is a role, not a product; the question asks what bees produce.",
     "Bees turn nectar into honey, their well-known product.",
     "Bees collect nectar and turn it into honey; milk comes from mammals and wool from sheep, so honey is the answer.",
     True),
    ("Question: Where do you go to watch a film on a big screen?\nOptions:\n- cinema\n- bakery\n- bank",
     "You can watch films at home on a television screen.",
     "Home viewing ignores the big screen requirement and the options.",
     "A cinema shows films on a large screen to an audience.",
     "Films on a big screen are shown at the cinema; bakeries sell bread and banks handle money, so the cinema is the only fitting option.",
     True),
    ("Question: What do you wear on your feet in winter snow?\nOptions:\n- boots\n- sandals\n- gloves",
     "You wear gloves in winter because it is cold.",
     "Gloves warm hands; the question asks about feet.",
     "Boots keep feet warm and dry in snow.",
     "Boots are worn on the feet and keep them warm and dry in snow; sandals are for summer and gloves go on hands.",
     True),
    ("Question: Where would a judge work?\nOptions:\n- courtroom\n- barn\n- lighthouse",
     "A judge decides legal cases every day.",
     "States what a judge does but never where, and no option is chosen.",
     "Legal cases are heard in a courtroom, the judge's workplace.",
     "A judge hears cases in a courtroom; barns house animals and lighthouses guide ships, so the courtroom is the answer.",
     True),
    ("Question: What is used to unlock a door?\nOptions:\n- key\n- spoon\n- candle",
     "Doors can be opened in many different ways nowadays.",
     "Vague; the ordinary tool among the options is not named.",
     "A key fits the lock and unlocks the door.",
     "A key is cut to fit the lock, so a key unlocks the door; neither a spoon nor a candle engages the lock mechanism.",
     True),
    ("Question: Where do airplanes land?\nOptions:\n- airport\n- harbor\n- meadow",
     "Airplanes land wherever there is enough space for them.",
     "Too loose: scheduled aircraft land on prepared runways, which one option provides.",
     "Airplanes land on runways, which are found at airports.",
     "Airplanes land on prepared runways, and among the options only an airport has one; harbors serve ships and a meadow is unprepared ground.",
     True),
]

NLI = [
    ("Premise: A man is playing a guitar on stage.\nHypothesis: A musician is performing.",
     "The hypothesis contradicts the premise because a guitar is not mentioned.",
     "Backwards: the premise does mention a guitar, and playing on stage is performing.",
     "Playing a guitar on stage is a performance by a musician, so the premise entails the hypothesis.",
     "A man playing a guitar on stage is a musician giving a performance, so the hypothesis follows from the premise: entailment.",
     True),
    ("Premise: Two children are building a sandcastle on the beach.\nHypothesis: The children are sleeping indoors.",
     "The children could be sleeping after playing, so the statements agree.",
     "Speculation about later events is irrelevant; the sentences describe one moment.",
     "Building a sandcastle outdoors cannot happen while sleeping indoors, so the statements contradict each other.",
     "Building a sandcastle on the beach excludes sleeping indoors at the same moment, so the hypothesis contradicts the premise.",
     True),
    ("Premise: A woman in a red coat is crossing the street.\nHypothesis: A woman is outdoors.",
     "The color of the coat proves the woman is outdoors.",
     "The color is irrelevant; the location follows from crossing a street.",
     "Streets are outdoors, so crossing one places the woman outdoors: entailment.",
     "Crossing a street happens outdoors, so the premise entails that the woman is outdoors; the coat color plays no role.",
     True),
    ("Premise: A dog is chasing a ball in the park.\nHypothesis: The dog is eating dinner at home.",
     "Dogs often eat after playing, so the hypothesis is likely true.",
     "Likelihood of later events does not decide entailment; compare the described scenes.",
     "Chasing a ball in the park and eating at home cannot both describe the same scene: contradiction.",
     "The premise places the dog playing in the park, which rules out eating dinner at home at that moment: contradiction.",
     True),
    ("Premise: A chef is chopping vegetables in a kitchen.\nHypothesis: Someone is preparing food.",
     "The chef might be cleaning up rather than cooking.",
     "Chopping vegetables is itself food preparation; the doubt is unfounded.",
     "Chopping vegetables is a step of preparing food, so the hypothesis is entailed.",
     "Chopping vegetables in a kitchen is a form of preparing food, so the premise entails the hypothesis.",
     True),
    ("Premise: A crowd is watching a fireworks display at night.\nHypothesis: People are looking at the sky.",
     "The crowd may be looking at their phones instead of the fireworks.",
     "Watching a fireworks display means observing it; phones contradict the premise itself.",
     "Fireworks explode in the sky, so watching them means looking at the sky.",
     "Fireworks appear in the sky, so a crowd watching the display is looking at the sky: entailment.",
     True),
    ("Premise: A boy rides his bicycle down a hill.\nHypothesis: The boy is walking up the stairs.",
     "Both sentences are about a boy moving, so they agree.",
     "Shared subject is not agreement; the actions and directions are incompatible.",
     "Riding a bicycle downhill is not walking up stairs: contradiction.",
     "Riding a bicycle down a hill cannot be the same action as walking up stairs, so the sentences contradict each other.",
     True),
    ("Premise: An elderly couple is dancing at a wedding.\nHypothesis: Two people are dancing.",
     "The hypothesis adds nothing, so the relation is neutral.",
     "A couple consists of two people; the hypothesis generalizes, which is entailment, not neutrality.",
     "A couple is two people, so the premise entails that two people are dancing.",
     "A couple means two people, so an elderly couple dancing entails that two people are dancing.",
     True),
    ("Premise: A waiter is carrying three plates to a table.\nHypothesis: The waiter dropped every plate.",
     "Carrying plates can end with dropping them, so the hypothesis follows.",
     "A possible future mishap is not stated; the premise describes successful carrying.",
     "The premise says the plates are being carried, which conflicts with all of them already dropped.",
     "The premise describes the waiter carrying the plates; dropping every plate conflicts with that description: contradiction.",
     True),
    ("Premise: Students are taking an exam in a quiet hall.\nHypothesis: People are writing in a room.",
     "Exams are stressful, which makes the hypothesis plausible.",
     "Stress is beside the point; connect exam-taking to writing in a room.",
     "Taking an exam involves writing, and a hall is a room, so the hypothesis is entailed.",
     "Taking an exam means writing answers, and a hall is a room, so people are writing in a room: entailment.",
     True),
    ("Premise: A fisherman is mending his net on the dock.\nHypothesis: The man is repairing fishing equipment.",
     "The hypothesis is neutral because nets are not equipment.",
     "A net is fishing equipment; mending is repairing.",
     "Mending a net is repairing fishing equipment, so the premise entails the hypothesis.",
     "A net is fishing equipment and mending means repairing it, so the premise entails the hypothesis.",
     True),
    ("Premise: A girl in a yellow dress is blowing out birthday candles.\nHypothesis: The girl is celebrating her birthday.",
     "The dress color shows it is her birthday.",
     "Color proves nothing; the candles are the relevant evidence, and strictly they could be another person's cake.",
     "Blowing out birthday candles strongly suggests the girl is celebrating a birthday, though the cake could belong to someone else; many guidelines label this entailment.",
     "Blowing out the candles on a birthday cake is the customary act of the person celebrating, so the hypothesis follows from the premise.",
     True),
    ("Premise: Workers are repairing the road near the school.\nHypothesis: The road is completely finished.",
     "Repairs mean the road will soon be finished, so the statements agree.",
     "Ongoing repairs are the opposite of completed work.",
     "If workers are still repairing the road, it is not completely finished: contradiction.",
     "Ongoing repairs mean the road is not yet finished, so the hypothesis contradicts the premise.",
     True),
    ("Premise: A cat sleeps on a windowsill in the sun.\nHypothesis: An animal is resting.",
     "Cats sleep a lot, so the hypothesis is neutral.",
     "The frequency of cat naps is irrelevant; apply the category relation.",
     "A cat is an animal and sleeping is resting, so the hypothesis is entailed.",
     "A cat is an animal and sleeping is a form of resting, so the premise entails the hypothesis.",
     True),
    ("Premise: A runner crosses the finish line with arms raised.\nHypothesis: The race has ended for the runner.",
     "Raised arms show the runner is tired.",
     "Tiredness is a guess; the finish line is what matters.",
     "Crossing the finish line ends the race for that runner.",
     "Crossing the finish line marks the end of the race for the runner, so the hypothesis follows.",
     True),
    ("Premise: A family is packing suitcases into a car.\nHypothesis: The family is about to travel.",
     "Packing suitcases means they are moving to a new house.",
     "Moving house is one unsupported reading; the general conclusion about travel fits better.",
     "Loading suitcases into a car indicates an imminent trip.",
     "Packing suitcases into a car indicates a trip is starting, so the family is about to travel.",
     True),
    ("Premise: A barista is pouring milk into a cup of coffee.\nHypothesis: Someone is preparing a drink.",
     "Baristas work in cafes, so the hypothesis is entailed.",
     "The workplace is not the reason; the pouring action is.",
     "Pouring milk into coffee is preparing a drink, so the hypothesis is entailed.",
     "Pouring milk into a cup of coffee is the act of preparing a drink, so the premise entails the hypothesis.",
     True),
    ("Premise: Two teams are playing football in a stadium.\nHypothesis: The stadium is empty.",
     "Stadiums are sometimes empty during training.",
     "The premise includes two teams playing, so at least the players are present.",
     "With two teams playing, the stadium cannot be empty: contradiction.",
     "Two teams playing inside means people are present, so an empty stadium contradicts the premise.",
     True),
    ("Premise: A painter is covering the wall with blue paint.\nHypothesis: The wall is being decorated.",
     "The painter might dislike the color blue.",
     "The painter's taste is irrelevant to the relation between the sentences.",
     "Painting a wall is a way of decorating it, so the hypothesis is entailed.",
     "Covering a wall with paint is a form of decorating it, so the premise entails the hypothesis.",
     True),
    ("Premise: A nurse is taking a patient's temperature.\nHypothesis: A medical check is taking place.",
     "Nurses are busy people who perform many duties in hospitals.",
     "Generic praise of nurses never addresses the relation.",
     "Taking a temperature is a medical check, so the hypothesis is entailed.",
     "Measuring a patient's temperature is a medical check, so the hypothesis follows from the premise.",
     True),
]

FACT = [
    ("Claim: Drinking cranberry juice cures urinary tract infections.\nDocument: Trials found cranberry products may modestly reduce the risk of recurring infections in some groups. No study showed that juice cures an existing infection. Antibiotics remain the standard treatment.",
     "The claim is true because cranberry juice helps with infections.",
     "Helps with risk reduction is not the same as curing; the document explicitly denies a cure.",
     "The document distinguishes modest prevention from cure and names antibiotics as the treatment, so the claim is false.",
     "The document says cranberry products may modestly reduce recurrence risk but that no study showed a cure, with antibiotics as standard treatment, so the claim is false.",
     True),
    ("Claim: Vitamin C supplements prevent the common cold.\nDocument: Large reviews conclude that regular vitamin C does not prevent colds in the general population, though it may slightly shorten their duration. In people under heavy physical stress a preventive effect was observed.",
     "Vitamin C is healthy, therefore the claim is true.",
     "General healthiness is not evidence; the document denies prevention for the general population.",
     "The document reports no prevention in the general population, only shorter duration, so the claim is mostly false.",
     "According to the document, regular vitamin C does not prevent colds in the general population and only slightly shortens them, so the claim is false for most people.",
     True),
    ("Claim: Daily walking lowers resting heart rate.\nDocument: A cohort study of adults who walked at least thirty minutes daily recorded a small but consistent decrease in resting heart rate after three months. The effect persisted after adjusting for age and weight.",
     "The claim is false because walking is too light an exercise.",
     "Contradicts the document, which reports a measured decrease.",
     "The cohort study found a consistent decrease in resting heart rate, supporting the claim.",
     "The document reports a consistent decrease in resting heart rate among daily walkers, adjusted for age and weight, so the claim is supported.",
     True),
    ("Claim: Eating carrots gives humans night vision.\nDocument: Carrots provide beta carotene, which supports normal vision. Severe vitamin A deficiency harms night vision, and correcting it restores normal sight. No food grants vision beyond the normal range.",
     "Carrots improve eyesight, so the claim is true.",
     "Overstated: restoring normal sight in deficiency is not granting night vision.",
     "The document says no food grants vision beyond the normal range, so the claim is false.",
     "The document states carrots only support normal vision and that no food grants sight beyond the normal range, so the claim is false.",
     True),
    ("Claim: The new screening program detects most early-stage cases.\nDocument: In the pilot, the program identified 82 percent of early-stage cases. Detection dropped to 64 percent outside specialized centers. The authors call for wider validation.",
     "The program detects all cases according to the pilot.",
     "All is wrong: the figures are 82 and 64 percent, and validation is pending.",
     "The pilot supports detecting most early cases, with weaker results outside specialized centers.",
     "With 82 percent detection in the pilot, the claim that most early-stage cases are found is supported, though performance fell to 64 percent outside specialized centers.",
     True),
    ("Claim: Honey is safe for infants under one year.\nDocument: Health agencies advise against honey for children younger than twelve months because of the risk of infant botulism. After the first year the digestive system can handle the spores.",
     "Honey is natural, so it is safe for babies.",
     "Natural does not mean safe; the document names a specific risk for infants.",
     "The document warns against honey before twelve months due to botulism risk, so the claim is false.",
     "Health agencies cited in the document advise against honey in the first year because of infant botulism, so the claim is false.",
     True),
    ("Claim: The drug reduced hospital stays in the trial.\nDocument: Patients on the drug left hospital after a median of six days versus nine days for placebo. The difference was statistically significant. Side effects were comparable between groups.",
     "The claim is unknown because the document gives no numbers.",
     "The document does give numbers: six versus nine days, significant.",
     "The median stay fell from nine to six days with significance, supporting the claim.",
     "The trial in the document shows a significant drop in median stay from nine to six days under the drug, so the claim is supported.",
     True),
    ("Claim: Microwaving food destroys all of its nutrients.\nDocument: Studies comparing cooking methods find microwaving preserves nutrients as well as or better than boiling, because cooking times are shorter and less water is used. Some vitamin loss occurs with any heating.",
     "Microwaves are radiation, so the claim is true.",
     "The word radiation is doing unearned work; the document reports good nutrient retention.",
     "The document says microwaving preserves nutrients comparatively well, so the claim is false.",
     "The document reports that microwaving retains nutrients as well as or better than boiling and that only some loss occurs with any heating, so the claim is false.",
     True),
    ("Claim: Regular meditation lowers self-reported stress.\nDocument: A randomized trial assigned office workers to eight weeks of guided meditation or a waiting list. The meditation group reported significantly lower stress scores. Objective cortisol measurements were inconclusive.",
     "The claim is false because cortisol did not change.",
     "The claim concerns self-reported stress, which did improve; cortisol is a different endpoint.",
     "Self-reported stress fell significantly in the meditation group, supporting the claim as stated.",
     "The trial found significantly lower self-reported stress after eight weeks of meditation, which is what the claim states, so it is supported; only the hormonal evidence was inconclusive.",
     True),
    ("Claim: The city's tap water exceeded lead limits last year.\nDocument: Quarterly tests of the municipal supply stayed below the legal lead threshold in all four quarters. One private building with old pipes exceeded the limit; the supply itself did not.",
     "Lead was found, so the claim is true.",
     "The exceedance was in one building's pipes, not the municipal supply the claim targets.",
     "All quarterly tests of the supply stayed below the threshold, so the claim is false.",
     "The municipal supply stayed below the legal lead limit in every quarter; only one building's private pipes exceeded it, so the claim about the city's tap water is false.",
     True),
    ("Claim: Fermented foods improve gut bacteria diversity.\nDocument: A ten-week diet study found participants eating fermented foods showed increased microbiome diversity and lower inflammation markers. The fiber group showed no diversity change in the same period.",
     "The claim is unknown because diets differ between people.",
     "The cited study directly measured the outcome; individual variation does not erase it.",
     "The study recorded increased microbiome diversity with fermented foods, supporting the claim.",
     "The ten-week study in the document found higher microbiome diversity and lower inflammation with fermented foods, so the claim is supported.",
     True),
    ("Claim: The bridge was closed because of structural damage.\nDocument: The authority closed the bridge for a scheduled cable inspection. The inspection found the structure sound, and the bridge reopened two days later as planned.",
     "The bridge closed, which proves the damage claim.",
     "Closure is common ground; the reason given in the document is a scheduled inspection, not damage.",
     "The document attributes the closure to planned inspection and reports a sound structure, so the claim is false.",
     "The closure was a planned cable inspection and the structure was found sound, so the claim that damage closed the bridge is false.",
     True),
    ("Claim: Screen use before bedtime delays falling asleep.\nDocument: A meta-analysis of sleep studies associates evening screen exposure with longer sleep onset, attributing part of the effect to blue light suppressing melatonin. Effect sizes varied across ages.",
     "Screens are part of modern life, so the claim is exaggerated.",
     "Popularity of screens does not rebut the measured association.",
     "The meta-analysis links evening screens to longer sleep onset, supporting the claim.",
     "The meta-analysis associates evening screen exposure with longer time to fall asleep, partly via melatonin suppression, so the claim is supported.",
     True),
    ("Claim: The vaccine caused the regional rise in infections.\nDocument: Infections rose during a period of relaxed distancing rules. Vaccinated individuals had markedly lower infection rates than unvaccinated ones. No mechanism linking the vaccine to increased transmission was identified.",
     "Infections rose after vaccination started, so the vaccine caused the rise.",
     "After is not because: the document points to relaxed rules and lower rates among the vaccinated.",
     "The document attributes the rise to relaxed rules and reports lower rates among vaccinated people, so the claim is false.",
     "The rise coincided with relaxed distancing, vaccinated people had lower infection rates, and no causal mechanism was found, so the claim is false.",
     True),
    ("Claim: Cold weather by itself causes the common cold.\nDocument: Colds are caused by viruses. Winter crowding indoors increases transmission, and chilled airways may resist viruses slightly less, but exposure to cold air without the virus does not produce illness.",
     "People catch colds in winter, so cold weather causes them.",
     "Seasonality is explained by indoor transmission; the virus remains the cause.",
     "The document names viruses as the cause and denies that cold air alone produces illness, so the claim is false.",
     "Per the document, viruses cause colds; winter mainly increases indoor transmission, and cold air without the virus does not cause illness, so the claim is false.",
     True),
    ("Claim: The supplement improves marathon finishing times.\nDocument: The only controlled trial measured five-kilometer times and found no improvement. No marathon data exists. The manufacturer's claims rely on testimonials.",
     "The supplement works because many runners recommend it.",
     "Testimonials are the weakest evidence; the trial found no effect and marathons were never studied.",
     "With no marathon data and a negative short-distance trial, the claim is unsupported: unknown leaning false.",
     "No marathon study exists and the one controlled trial at a shorter distance found no improvement, so the claim is unsupported by the document.",
     True),
    ("Claim: Office plants reduce sick days.\nDocument: An observational workplace survey found offices with plants reported slightly fewer sick days, but the study could not rule out that healthier workplaces simply buy more plants. Controlled evidence is lacking.",
     "Plants produce oxygen, so the claim is true.",
     "The oxygen argument is not in the document; the study itself warns about reverse causation.",
     "Only weak observational evidence with a confounding warning exists, so the truth of the claim is unknown.",
     "The survey links plants to slightly fewer sick days but cannot exclude reverse causation and lacks controlled evidence, so the claim's truth is unknown.",
     True),
    ("Claim: The museum's oldest exhibit is over two thousand years old.\nDocument: The collection catalogue dates the oldest exhibit, a bronze vessel, to roughly 300 BCE. The dating was confirmed by two independent laboratories.",
     "The museum has many old exhibits, so the claim is plausible.",
     "Plausibility is not verification; use the catalogue date.",
     "An exhibit dated to 300 BCE is over two thousand years old, supporting the claim.",
     "The catalogue dates the bronze vessel to about 300 BCE, more than two thousand years ago, and two laboratories confirmed it, so the claim is supported.",
     True),
    ("Claim: Intermittent fasting is more effective than calorie counting for weight loss.\nDocument: A year-long randomized trial found similar weight loss in both groups. Dropout rates were also comparable. The authors conclude neither approach is superior.",
     "Fasting is trendy and many people report success with it.",
     "Trendiness and anecdotes ignore the randomized comparison.",
     "The trial found similar results for both approaches, so the superiority claim is false.",
     "The randomized trial found similar weight loss and dropout in both groups, with the authors concluding neither is superior, so the claim is false.",
     True),
    ("Claim: Recycling aluminium saves most of the energy of new production.\nDocument: Industry assessments state recycling aluminium uses about five percent of the energy needed for primary production from ore, saving roughly ninety-five percent.",
     "Recycling always saves some energy, so the claim is true.",
     "Right direction but no figure; cite the ninety-five percent saving.",
     "The document quantifies the saving at about ninety-five percent, so the claim is supported.",
     "Per the document, recycled aluminium needs only about five percent of the energy of primary production, a saving near ninety-five percent, so the claim is supported.",
     True),
]


def main() -> None:
    OUT.parent.mkdir(parents=True, exist_ok=True)
    entries = []
    for prefix, block in (("qa", QA), ("nli", NLI), ("fc", FACT)):
        for i, (inp, initial, feedback, suggestion, refined, needs) in enumerate(block, start=1):
            entries.append(
                {
                    "id": f"{prefix}-{i:02d}",
                    "input": inp,
                    "initial_explanation": initial,
                    "feedback": feedback,
                    "suggestion": suggestion,
                    "refined_explanation": refined,
                    "needs_further_refinement": needs,
                }
            )
    assert len(entries) == 60, len(entries)
    with OUT.open("w", encoding="utf-8") as handle:
        for entry in entries:
            record = dict(entry, token_count=Demonstration.count_tokens(entry))
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
    print(f"wrote {len(entries)} demonstrations to {OUT}")


if __name__ == "__main__":
    main()
