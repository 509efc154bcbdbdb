#!/usr/bin/env python3
"""Regenerates resources/ and fixtures/ for the landuse workspace.

Run from the repository root:  python3 tools/gen_fixtures.py

Everything is derived from one word table and one seeded RNG so the
bundled corpus, the TSV resources and the block map stay mutually
consistent (every generated token is known to the lexicon, every post
coordinate agrees with the grid).
"""

import json
import random
from pathlib import Path

SEED = 20190401
ROOT = Path(__file__).resolve().parent.parent
RESOURCES = ROOT / "resources"
FIXTURES = ROOT / "fixtures"

# ---------------------------------------------------------------------------
# Word tables: (lemma, tag, [surface variants])
# ---------------------------------------------------------------------------

CLASS_WORDS = {
    "Commercial": [
        ("tienda", "NC", ["tienda", "tiendas"]),
        ("comprar", "VMI", ["compro", "compras", "compramos", "compran"]),
        ("comprar", "VMG", ["comprando"]),
        ("zapato", "NC", ["zapato", "zapatos"]),
        ("ropa", "NC", ["ropa"]),
        ("precio", "NC", ["precio", "precios"]),
        ("oferta", "NC", ["oferta", "ofertas"]),
        ("vestido", "NC", ["vestido", "vestidos"]),
        ("mercado", "NC", ["mercado", "mercados"]),
    ],
    "CommercialRestaurant": [
        ("restaurante", "NC", ["restaurante", "restaurantes"]),
        ("comer", "VMI", ["como", "comemos", "comen"]),
        ("comer", "VMG", ["comiendo"]),
        ("almuerzo", "NC", ["almuerzo", "almuerzos"]),
        ("cena", "NC", ["cena", "cenas"]),
        ("ceviche", "NC", ["ceviche"]),
        ("plato", "NC", ["plato", "platos"]),
        ("rico", "AQ", ["rico", "rica", "ricos", "ricas"]),
        ("desayuno", "NC", ["desayuno", "desayunos"]),
    ],
    "CommercialService": [
        ("hotel", "NC", ["hotel", "hoteles"]),
        ("habitación", "NC", ["habitación", "habitaciones"]),
        ("reserva", "NC", ["reserva", "reservas"]),
        ("reservar", "VMI", ["reservo", "reservamos", "reservan"]),
        ("reservar", "VMG", ["reservando"]),
        ("servicio", "NC", ["servicio", "servicios"]),
        ("peluquería", "NC", ["peluquería", "peluquerías"]),
        ("salón", "NC", ["salón", "salones"]),
        ("cliente", "NC", ["cliente", "clientes"]),
    ],
    "Institutional": [
        ("municipalidad", "NC", ["municipalidad"]),
        ("trámite", "NC", ["trámite", "trámites"]),
        ("tramitar", "VMI", ["tramito", "tramitamos", "tramitan"]),
        ("tramitar", "VMG", ["tramitando"]),
        ("gobierno", "NC", ["gobierno"]),
        ("ministerio", "NC", ["ministerio", "ministerios"]),
        ("alcalde", "NC", ["alcalde", "alcaldes"]),
        ("banco", "NC", ["banco", "bancos"]),
        ("documento", "NC", ["documento", "documentos"]),
    ],
    "InstitutionalEducation": [
        ("universidad", "NC", ["universidad", "universidades"]),
        ("escuela", "NC", ["escuela", "escuelas"]),
        ("clase", "NC", ["clase", "clases"]),
        ("estudiar", "VMI", ["estudio", "estudiamos", "estudian"]),
        ("estudiar", "VMG", ["estudiando"]),
        ("examen", "NC", ["examen", "exámenes"]),
        ("profesor", "NC", ["profesor", "profesores", "profesora"]),
        ("biblioteca", "NC", ["biblioteca", "bibliotecas"]),
    ],
    "InstitutionalCultural": [
        ("museo", "NC", ["museo", "museos"]),
        ("iglesia", "NC", ["iglesia", "iglesias"]),
        ("misa", "NC", ["misa", "misas"]),
        ("concierto", "NC", ["concierto", "conciertos"]),
        ("cantar", "VMI", ["canto", "cantamos", "cantan"]),
        ("cantar", "VMG", ["cantando"]),
        ("arte", "NC", ["arte", "artes"]),
        ("catedral", "NC", ["catedral", "catedrales"]),
        ("convento", "NC", ["convento", "conventos"]),
        ("exposición", "NC", ["exposición", "exposiciones"]),
    ],
    "IndustrialOffices": [
        ("oficina", "NC", ["oficina", "oficinas"]),
        ("trabajo", "NC", ["trabajo", "trabajos"]),
        ("trabajar", "VMI", ["trabajamos", "trabajan"]),
        ("trabajar", "VMG", ["trabajando"]),
        ("salir", "VMG", ["saliendo"]),
        ("reunión", "NC", ["reunión", "reuniones"]),
        ("empresa", "NC", ["empresa", "empresas"]),
        ("fábrica", "NC", ["fábrica", "fábricas"]),
        ("galería", "NC", ["galería", "galerías"]),
        ("proyecto", "NC", ["proyecto", "proyectos"]),
        ("informe", "NC", ["informe", "informes"]),
        ("work", "NC", ["work"]),
    ],
    "Residential": [
        ("casa", "NC", ["casa", "casas"]),
        ("casa", "NC", ["casa", "casas"]),
        ("película", "NC", ["película", "películas"]),
        ("película", "NC", ["película", "películas"]),
        ("hogar", "NC", ["hogar"]),
        ("familia", "NC", ["familia", "familias"]),
        ("departamento", "NC", ["departamento", "departamentos"]),
        ("descansar", "VMI", ["descanso", "descansamos", "descansan"]),
        ("descansar", "VMG", ["descansando"]),
        ("vecino", "NC", ["vecino", "vecinos", "vecina"]),
    ],
    "UnbuiltLand": [
        ("parque", "NC", ["parque", "parques"]),
        ("río", "NC", ["río"]),
        ("campo", "NC", ["campo", "campos"]),
        ("árbol", "NC", ["árbol", "árboles"]),
        ("caminar", "VMI", ["caminamos", "caminan"]),
        ("caminar", "VMG", ["caminando"]),
        ("pasto", "NC", ["pasto"]),
        ("aire", "NC", ["aire"]),
        ("puente", "NC", ["puente", "puentes"]),
        ("plaza", "NC", ["plaza", "plazas"]),
    ],
}

# Proper-name places, exclusive per class; multiword names become one
# underscore-joined NP token downstream.
CLASS_PLACES = {
    "Commercial": ["tambo", "siglo", "portal flores"],
    "CommercialRestaurant": ["karloncho", "zingaro", "mar adentro"],
    "CommercialService": ["ritz", "crismar", "sol serrano"],
    "Institutional": ["sunat", "reniec", "palacio municipal"],
    "InstitutionalEducation": ["unsa", "ucsp", "san agustín"],
    "InstitutionalCultural": ["santa catalina", "san francisco", "goyeneche"],
    "IndustrialOffices": ["san josé", "nicolasa", "innova"],
    "Residential": ["vallecito", "selvalegre", "quinta salas"],
    "UnbuiltLand": ["chilina", "tingo", "monte blanco"],
}

# Shared fillers: nouns and adjectives that appear in every class.
FILLER_NOUNS = [
    ("día", "NC", ["día", "días", "dia", "dias"]),
    ("tarde", "NC", ["tarde", "tardes"]),
    ("noche", "NC", ["noche", "noches"]),
    ("momento", "NC", ["momento", "momentos"]),
    ("gente", "NC", ["gente"]),
]
FILLER_ADJS = [
    ("bueno", "AQ", ["bueno", "buena", "buenos", "buenas"]),
    ("grande", "AQ", ["grande", "grandes"]),
    ("nuevo", "AQ", ["nuevo", "nueva", "nuevos", "nuevas"]),
    ("amigo", "AQ", ["amigo", "amigos", "amiga", "amigas"]),
]

# Chatter vocabulary for the unlabeled (non-location) corpus. No "en",
# no "de", no proper names; adverbs and pronouns that the location posts
# never use keep the PoS profiles apart.
CHATTER_WORDS = {
    "RG": [
        ("siempre", ["siempre"]),
        ("nunca", ["nunca"]),
        ("mucho", ["mucho"]),
        ("ayer", ["ayer"]),
        ("casi", ["casi"]),
    ],
    "VMI": [
        ("querer", ["quiero", "queremos", "quieren"]),
        ("pensar", ["pienso", "pensamos", "piensan"]),
        ("creer", ["creo", "creemos", "creen"]),
        ("sentir", ["siento", "sentimos", "sienten"]),
    ],
    "PI": [
        ("nada", ["nada"]),
        ("algo", ["algo"]),
        ("nadie", ["nadie"]),
        ("alguien", ["alguien"]),
        ("todo", ["todo", "todos"]),
    ],
    "NC": [
        ("cosa", ["cosa", "cosas"]),
        ("vida", ["vida"]),
        ("tiempo", ["tiempo"]),
        ("mundo", ["mundo"]),
        ("fútbol", ["fútbol"]),
        ("partido", ["partido", "partidos"]),
        ("equipo", ["equipo", "equipos"]),
        ("música", ["música"]),
        ("canción", ["canción", "canciones"]),
        ("suerte", ["suerte"]),
    ],
    "AQ": [
        ("aburrido", ["aburrido", "aburrida"]),
        ("feliz", ["feliz", "felices"]),
        ("triste", ["triste", "tristes"]),
        ("raro", ["raro", "rara", "raros"]),
        ("difícil", ["difícil", "difíciles"]),
    ],
}

# Extra lexicon rows used by hand-written application posts and tests.
EXTRA_LEXICON = [
    ("estoy", "estar", "VMI"),
    ("estamos", "estar", "VMI"),
    ("cualquiera", "cualquiera", "PI"),
    ("saliendo", "salir", "VMG"),
    ("terminando", "terminar", "VMG"),
    ("venido", "venir", "VMP"),
    ("santa", "santo", "NC"),
    ("santo", "santo", "NC"),
    ("domingo", "domingo", "NC"),
    ("amor", "amor", "NC"),
    ("work", "work", "NC"),
    ("centro", "centro", "NC"),
    ("comercial", "comercial", "AQ"),
    ("mamá", "mamá", "NC"),
    ("en", "en", "SP"),
    ("de", "de", "SP"),
]

STOPWORDS = """a al ante como con cual cuando del desde donde el ella ellos es esa
ese esta este esto ha han hay he la las le les lo los me mi mis muy ni no
nos o os para pero poco por porque q que qué se ser si sí sin sobre son soy
su sus te tu tus un una uno unos y ya en de""".split()

ABBREVIATIONS = [
    ("cevicheria", "restaurante"),
    ("mallplaza", "centro comercial"),
    ("mallplazaperu", "centro comercial"),
    ("cc", "centro comercial"),
    ("resto", "restaurante"),
    ("uni", "universidad"),
    ("profe", "profesor"),
    ("depa", "departamento"),
    ("muni", "municipalidad"),
    ("mami", "mamá"),
]

SUGGESTIONS = [
    ("sapato", "apasto,zapato,patoso,topatopa,sato,pato"),
    ("clubmilita", "club militar,club-militar,militarizar"),
    ("casiita", "casinita,casiterita,marcasita,canastita"),
    ("munays", "ayunas"),
    ("galeria", "galería"),
    ("jose", "josé"),
]

SUB_COUNTS = [
    ("Commercial", "Commercial", 28),
    ("CommercialRestaurant", "Commercial", 26),
    ("CommercialService", "Commercial", 20),
    ("Institutional", "InstitutionalGovernmental", 22),
    ("InstitutionalEducation", "InstitutionalGovernmental", 20),
    ("InstitutionalCultural", "InstitutionalGovernmental", 20),
    ("IndustrialOffices", "IndustrialOffices", 22),
    ("Residential", "Residential", 21),
    ("UnbuiltLand", "UnbuiltLand", 21),
]
N_CHATTER = 50

# ---------------------------------------------------------------------------
# Resource files
# ---------------------------------------------------------------------------


def place_lexicon_row(place):
    return (place, place.replace(" ", "_"), "NP")


def build_lexicon_rows():
    rows = {}

    def add(surface, lemma, tag):
        rows[surface] = (lemma, tag)

    for words in CLASS_WORDS.values():
        for lemma, tag, variants in words:
            for v in variants:
                add(v, lemma, tag)
    for places in CLASS_PLACES.values():
        for place in places:
            surface, lemma, tag = place_lexicon_row(place)
            add(surface, lemma, tag)
    for lemma, tag, variants in FILLER_NOUNS + FILLER_ADJS:
        for v in variants:
            add(v, lemma, tag)
    for tag, entries in CHATTER_WORDS.items():
        for lemma, variants in entries:
            for v in variants:
                add(v, lemma, tag)
    for surface, lemma, tag in EXTRA_LEXICON:
        add(surface, lemma, tag)
    return sorted(rows.items())


def write_resources():
    RESOURCES.mkdir(exist_ok=True)
    with open(RESOURCES / "lexicon.tsv", "w", encoding="utf-8") as f:
        f.write("# surface<TAB>lemma<TAB>tag\n")
        for surface, (lemma, tag) in build_lexicon_rows():
            f.write(f"{surface}\t{lemma}\t{tag}\n")
    with open(RESOURCES / "stoplist.tsv", "w", encoding="utf-8") as f:
        f.write("# one stopword per line; en/de are retained by the pipeline\n")
        for w in STOPWORDS:
            f.write(w + "\n")
    with open(RESOURCES / "abbreviations.tsv", "w", encoding="utf-8") as f:
        f.write("# source<TAB>replacement\n")
        for src, dst in ABBREVIATIONS:
            f.write(f"{src}\t{dst}\n")
    with open(RESOURCES / "suggestions.tsv", "w", encoding="utf-8") as f:
        f.write("# word<TAB>comma-joined candidates\n")
        for word, cands in SUGGESTIONS:
            f.write(f"{word}\t{cands}\n")


# ---------------------------------------------------------------------------
# Corpus generation
# ---------------------------------------------------------------------------


def pick_variant(rng, table, tag_filter=None):
    pool = [w for w in table if tag_filter is None or w[1] in tag_filter]
    lemma, tag, variants = rng.choice(pool)
    return rng.choice(variants)


def pick_place(rng, sub):
    # Biased toward the first place so "... en <place>" phrases repeat
    # often enough to survive a df cut even as trigrams.
    places = CLASS_PLACES[sub]
    roll = rng.random()
    if roll < 0.5:
        return places[0]
    if roll < 0.8:
        return places[1]
    return places[2]


# Templates weighted toward "<verb|noun> en <place>" skeletons: the verb
# and noun slots rotate through inflected variants, so the lemmatized
# phrase repeats while the surface phrase fragments.
LOCATION_TEMPLATES = [0, 0, 0, 1, 1, 2, 2, 3, 4, 5, 6, 7]


def location_text(rng, sub):
    words = CLASS_WORDS[sub]
    place = pick_place(rng, sub)
    noun = lambda: pick_variant(rng, words, {"NC"})
    verb = lambda: pick_variant(rng, words, {"VMI"})
    gerund = lambda: pick_variant(rng, words, {"VMG"})
    filln = lambda: pick_variant(rng, FILLER_NOUNS)
    filla = lambda: pick_variant(rng, FILLER_ADJS)

    template = rng.choice(LOCATION_TEMPLATES)
    if template == 0:
        parts = [verb(), "en", place, noun()]
    elif template == 1:
        parts = ["estoy", "en", place, noun(), noun()]
    elif template == 2:
        parts = [noun(), "en", place, noun()]
    elif template == 3:
        parts = [noun(), noun(), "de", noun()]
    elif template == 4:
        parts = [noun(), filla(), "en", place, noun()]
    elif template == 5:
        parts = [verb(), noun(), noun(), filln()]
    elif template == 6:
        parts = [gerund(), noun(), "en", place]
    else:
        parts = [gerund(), "en", place, noun(), filln()]
    roll = rng.random()
    if roll < 0.45:
        parts.append(noun())
    elif roll < 0.7:
        parts.append(filla() if rng.random() < 0.5 else filln())
    return " ".join(parts)


def chatter_text(rng):
    pick = lambda tag: pick_variant(
        rng, [(l, tag, v) for l, v in CHATTER_WORDS[tag]]
    )
    template = rng.randrange(6)
    if template == 0:
        parts = [pick("RG"), pick("VMI"), pick("PI")]
    elif template == 1:
        parts = [pick("AQ"), pick("NC"), pick("RG")]
    elif template == 2:
        parts = [pick("PI"), pick("VMI"), pick("NC")]
    elif template == 3:
        parts = [pick("VMI"), pick("PI"), pick("RG")]
    elif template == 4:
        parts = [pick("NC"), pick("AQ"), pick("RG")]
    else:
        parts = [pick("RG"), pick("AQ"), pick("NC"), pick("NC")]
    if rng.random() < 0.4:
        parts.append(pick("NC"))
    return " ".join(parts)


def corpus_coordinates(rng):
    # Scattered well away from the study region.
    if rng.random() < 0.5:
        return round(rng.uniform(-17.6, -16.8), 6), round(rng.uniform(-72.5, -70.5), 6)
    return round(rng.uniform(-15.8, -12.5), 6), round(rng.uniform(-77.0, -70.2), 6)


def timestamp(rng):
    month = rng.randrange(4, 13)
    day = rng.randrange(1, 29)
    hour = rng.randrange(0, 24)
    return f"2019-{month:02d}-{day:02d}T{hour:02d}:00:00Z"


def write_corpus():
    rng = random.Random(SEED)
    seen_texts = set()
    corpus_rows = []
    label_rows = []

    idx = 0
    for sub, parent, count in SUB_COUNTS:
        for _ in range(count):
            idx += 1
            text = location_text(rng, sub)
            while text in seen_texts:
                text = location_text(rng, sub)
            seen_texts.add(text)
            lat, lon = corpus_coordinates(rng)
            pid = f"c{idx:03d}"
            corpus_rows.append(
                {
                    "id": pid,
                    "user_id": f"u{rng.randrange(1, 60):03d}",
                    "text": text,
                    "timestamp": timestamp(rng),
                    "lat": lat,
                    "lon": lon,
                    "lang": "es",
                }
            )
            label_rows.append({"id": pid, "parent": parent, "sub": sub})

    for k in range(N_CHATTER):
        text = chatter_text(rng)
        while text in seen_texts:
            text = chatter_text(rng)
        seen_texts.add(text)
        lat, lon = corpus_coordinates(rng)
        corpus_rows.append(
            {
                "id": f"n{k + 1:03d}",
                "user_id": f"u{rng.randrange(1, 60):03d}",
                "text": text,
                "timestamp": timestamp(rng),
                "lat": lat,
                "lon": lon,
                "lang": "es",
            }
        )

    with open(FIXTURES / "corpus.jsonl", "w", encoding="utf-8") as f:
        for row in corpus_rows:
            f.write(json.dumps(row, ensure_ascii=False) + "\n")
    with open(FIXTURES / "labels.jsonl", "w", encoding="utf-8") as f:
        for row in label_rows:
            f.write(json.dumps(row, ensure_ascii=False) + "\n")


# ---------------------------------------------------------------------------
# Block map: a 7x8 damero of 56 blocks inside an irregular region.
# All geometry in integer 1e-7 degree units to keep the emitted decimals
# exact and consistent with the post coordinates.
# ---------------------------------------------------------------------------

LON0 = -715400000
LAT0 = -164030000
PITCH = 11000
BLOCK = 10000
COLS = 7
ROWS = 8

REGION = [
    (-715406000, -164036000),
    (-715318000, -164036000),
    (-715318000, -163950000),
    (-715330000, -163937000),
    (-715406000, -163937000),
]

CADASTRE_CYCLE = [
    "Commercial",
    "Residential",
    "InstitutionalGovernmental",
    "UnbuiltLand",
    "IndustrialOffices",
]


def deg(v):
    return v / 1e7


def block_corner(i, j):
    return LON0 + i * PITCH, LAT0 + j * PITCH


def block_center(i, j):
    lon, lat = block_corner(i, j)
    return deg(lon + BLOCK // 2), deg(lat + BLOCK // 2)


def block_ring(i, j):
    lon, lat = block_corner(i, j)
    pts = [
        (lon, lat),
        (lon + BLOCK, lat),
        (lon + BLOCK, lat + BLOCK),
        (lon, lat + BLOCK),
        (lon, lat),
    ]
    return [[deg(x), deg(y)] for x, y in pts]


def write_geojson():
    features = [
        {
            "type": "Feature",
            "properties": {"role": "region", "name": "historic center"},
            "geometry": {
                "type": "Polygon",
                "coordinates": [[[deg(x), deg(y)] for x, y in REGION + [REGION[0]]]],
            },
        }
    ]
    n = 0
    for j in range(ROWS):
        for i in range(COLS):
            n += 1
            features.append(
                {
                    "type": "Feature",
                    "properties": {
                        "role": "block",
                        "block_id": f"B{n:02d}",
                        "cadastre_label": CADASTRE_CYCLE[(n - 1) % len(CADASTRE_CYCLE)],
                    },
                    "geometry": {"type": "Polygon", "coordinates": [block_ring(i, j)]},
                }
            )
    collection = {"type": "FeatureCollection", "features": features}
    with open(FIXTURES / "blocks.geojson", "w", encoding="utf-8") as f:
        json.dump(collection, f, ensure_ascii=False, indent=1)
        f.write("\n")


# ---------------------------------------------------------------------------
# Application posts: the hand-verified funnel 24 -> 20 -> 13 -> 9.
# ---------------------------------------------------------------------------

# (i, j) grid cells for the nine in-block posts; ids follow j*7+i+1.
IN_BLOCK = [
    ("a01", 2, 1, "Compro zapatos nuevos en Tambo #shopping"),
    ("a02", 4, 2, "Almuerzo rico con amigos en Mar Adentro https://t.co/x1Abc9"),
    ("a03", 1, 3, "Ofertas y precios buenos en la tienda Siglo"),
    ("a04", 6, 3, "Estoy en clases en la UNSA #estudio"),
    ("a05", 2, 4, "Terminando de cantar la santa misa en Santa Catalina"),
    ("a06", 2, 5, "Saliendo de la oficina #work en Galeria San Jose https://t.co/BvkDpu2zi6"),
    ("a07", 6, 5, "Tarde de películas en casa #amor #dulcehogar #movie time"),
    ("a08", 2, 6, "Caminamos en el parque grande con árboles"),
    ("a09", 2, 7, "xqzkwy vbnjqk zzkprw qqrtzz"),
]

STREET = [
    ("s10", deg(LON0 + 10500), deg(LAT0 + 5000), "Comprando ropa en Portal Flores"),
    ("s11", deg(LON0 + 3 * PITCH + 5000), deg(LAT0 + 21500), "Misa del domingo en San Francisco"),
    ("s12", deg(LON0 + 4 * PITCH + 10500), deg(LAT0 + 4 * PITCH + 5000), "Reunión de trabajo en Innova"),
    ("s13", deg(LON0 + 5 * PITCH + 5000), deg(LAT0 + 76500), "Descanso en casa con la familia"),
]

OUTSIDE = [
    ("o14", deg(-715360000), deg(-164060000), "Examen en la universidad hoy"),
    ("o15", deg(-715420000), deg(-163990000), "Ceviche rico en Zingaro"),
    ("o16", deg(-715500000), deg(-164200000), "Trabajando en la oficina nueva"),
    ("o17", deg(-715200000), deg(-163900000), "Película en casa esta noche"),
    ("o18", deg(-714800000), deg(-164500000), "Concierto de arte en Goyeneche"),
    ("o19", deg(-716000000), deg(-163500000), "Caminamos en el campo grande"),
    ("o20", deg(-715370000), deg(-163920000), "Trámites en la municipalidad ayer"),
]

REMOVABLE = [
    ("r21", "compro zapatos nuevos en tambo #shopping"),  # duplicate of a01
    ("r22", "hola"),  # single word
    ("r23", "12345 678"),  # only numbers
    ("r24", "   "),  # blank
]


def write_posts():
    rng = random.Random(SEED + 1)
    rows = []
    for pid, i, j, text in IN_BLOCK:
        lon, lat = block_center(i, j)
        rows.append((pid, lat, lon, text))
    for pid, lon, lat, text in STREET:
        rows.append((pid, lat, lon, text))
    for pid, lon, lat, text in OUTSIDE:
        rows.append((pid, lat, lon, text))
    for pid, text in REMOVABLE:
        rows.append((pid, deg(LAT0 + 5000), deg(LON0 + 5000), text))

    with open(FIXTURES / "posts.jsonl", "w", encoding="utf-8") as f:
        for pid, lat, lon, text in rows:
            row = {
                "id": pid,
                "user_id": f"u{rng.randrange(1, 40):03d}",
                "text": text,
                "timestamp": timestamp(rng),
                "lat": lat,
                "lon": lon,
                "lang": "es",
            }
            f.write(json.dumps(row, ensure_ascii=False) + "\n")


# ---------------------------------------------------------------------------
# Default run configuration
# ---------------------------------------------------------------------------

CONFIG = """# Default run configuration; paths are relative to the working directory.
paths.posts = fixtures/posts.jsonl
paths.corpus = fixtures/corpus.jsonl
paths.labels = fixtures/labels.jsonl
paths.geojson = fixtures/blocks.geojson
paths.dictionary = resources/abbreviations.tsv
paths.stoplist = resources/stoplist.tsv
paths.lexicon = resources/lexicon.tsv
paths.suggestions = resources/suggestions.tsv
paths.model = out/model.json
paths.out_dir = out

features.ngram_min = 1
features.ngram_max = 3
features.use_lemmas = true
features.use_tfidf = false
features.include_pos_ngrams = false
features.pos_ngram_min = 2
features.pos_ngram_max = 3
features.min_df = 2

classifier.alpha = 1.0
classifier.threshold = 0.5
classifier.i = 50
classifier.pos_ngram_min = 2
classifier.pos_ngram_max = 3

split.test_fraction = 0.2
split.seed = 42

spell.threshold = 0.71
"""


def main():
    FIXTURES.mkdir(exist_ok=True)
    write_resources()
    write_corpus()
    write_geojson()
    write_posts()
    (FIXTURES / "landuse.cfg").write_text(CONFIG, encoding="utf-8")
    print("resources/ and fixtures/ regenerated")


if __name__ == "__main__":
    main()
