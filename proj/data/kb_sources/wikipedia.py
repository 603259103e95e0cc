# Wikitext of the pages the bundled ontology names. A title mapped to None is
# answered with a missing-page error.

PAGES = {
    "Flood": """{{Short description|Overflow of water that submerges land}}
A '''flood''' is an overflow of water that submerges land that is usually dry.<ref>{{cite web|title=Flood}}</ref>

== Causes ==
Floods are most often caused by [[heavy rainfall|heavy rain]] over a short period. Heavy rain saturates the soil and river channels overflow their banks.
=== Upstream factors ===
[[Dam failure]] and rapid [[snowmelt]] release large volumes of water. Blocked drainage channels and deforestation worsen river flooding.
Coastal flooding follows storm surges and high tides.

== Effects ==
Floods damage property and roads. Flood water contaminates drinking water and spreads waterborne disease.
* Crop loss and livestock deaths
* Displacement of residents from low-lying areas
Economic losses follow the damage to roads and bridges.

== History ==
Records of floods go back thousands of years.
""",
    "Earthquake": """An '''earthquake''' is the shaking of the surface of the Earth.

== Causes ==
Most earthquakes are caused by the rupture of [[geological fault]]s. Stress builds along the fault until the rock slips.
Volcanic activity and [[mining]] induced stress also trigger earthquakes. Reservoir loading near large dams triggers small earthquakes.

== Effects ==
Ground shaking damages buildings and bridges. Building collapse causes most earthquake deaths.
Landslides and [[tsunami]]s follow large earthquakes. Fires break out when gas lines rupture.
{| class="wikitable"
| Magnitude || Effect
|}
""",
    "Avalanche": """An '''avalanche''' is a rapid flow of snow down a slope.

== History ==
Avalanches were recorded in the Alps during the Middle Ages. Soldiers died in avalanches during the First World War.
""",
    "Tropical cyclone": """A '''tropical cyclone''' is a rapidly rotating storm system.

== Causes ==
Tropical cyclones form over warm ocean water. Warm ocean water and moist air fuel the storm.
Low wind shear lets the storm organise around a low pressure centre.

== Impact ==
Storm surge floods coastal towns. Strong winds destroy houses and uproot trees.
Heavy rain from the storm causes flooding and landslides inland. Power outages follow damage to power lines.
Coastal towns lose fishing boats and harbours.
""",
    "Drought": """A '''drought''' is a period of drier than normal conditions.

== Causes ==
Droughts are caused by a lack of rainfall over a long period. High temperatures increase evaporation from soil and reservoirs.
Changes in ocean circulation such as [[El Niño]] shift rainfall away from farmland.

== Consequences ==
Drought causes crop failure and livestock deaths. Water shortage forces rationing in towns.
Crop failure leads to food shortage and famine. Dry vegetation increases the risk of wildfires.
""",
    "Wildfire": """A '''wildfire''' is an unplanned fire that burns in vegetation.

== Causes ==
Lightning strikes ignite dry vegetation. Human activity such as [[arson]] and discarded cigarettes starts many fires.
Hot dry winds spread the fire across grassland and forest.

== Effects ==
Wildfires destroy homes and forests. Smoke causes air pollution and breathing problems.
Burned slopes lose vegetation and erode during later rain.
""",
    "Epidemic": """An '''epidemic''' is the rapid spread of disease to many people.

== Causes ==
Epidemics spread through contaminated water and poor sanitation. Crowded living conditions help the virus spread between people.
A new virus strain spreads quickly when people have no immunity.

== Effects ==
Epidemics cause deaths and hospital overcrowding. Schools close and travel restrictions follow.
Economic losses follow quarantine measures.
""",
    "Industrial accident": """An '''industrial accident''' is an accident at a factory or plant.

== Causes ==
Equipment failure and poor maintenance cause many industrial accidents. Gas leaks ignite and cause explosions.
Negligence and inadequate safety training increase the risk.

== Aftermath ==
Workers suffer injuries and burns. Toxic gas release forces the evacuation of nearby residents.
Factories shut down during the investigation.
""",
    "Traffic collision": """A '''traffic collision''' occurs when a vehicle collides with another vehicle or object.

== Causes ==
Speeding and drunk driving cause many collisions. Poor road conditions and poor visibility also contribute.
Driver fatigue slows reaction times.

== Effects ==
Collisions cause injuries and deaths. Traffic jams form behind the crash site.
Damaged vehicles block the road for hours.
""",
    "Terrorism": """'''Terrorism''' is the use of violence against civilians for political aims.

== Causes ==
Extremism and political grievances motivate attacks. Radicalisation spreads through extremist networks.

== Effects ==
Attacks cause casualties and destruction. Fear spreads among the public and security measures increase.
Tourism declines after major attacks.
""",
}
