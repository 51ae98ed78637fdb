//! The 235 language labels of WiLI-2018 with their English names.
//!
//! Codes are ISO 639-3 where one exists, otherwise the Wikipedia code.

/// `(code, name)` pairs, sorted by code.
pub const WILI_2018: &[(&str, &str)] = &[
    ("ace", "Achinese"),
    ("afr", "Afrikaans"),
    ("als", "Tosk Albanian"),
    ("amh", "Amharic"),
    ("ang", "Old English"),
    ("ara", "Arabic"),
    ("arg", "Aragonese"),
    ("arz", "Egyptian Arabic"),
    ("asm", "Assamese"),
    ("ast", "Asturian"),
    ("ava", "Avar"),
    ("aym", "Aymara"),
    ("azb", "South Azerbaijani"),
    ("aze", "Azerbaijani"),
    ("bak", "Bashkir"),
    ("bar", "Bavarian"),
    ("bcl", "Central Bikol"),
    ("be-tarask", "Belarusian (Taraschkewiza)"),
    ("bel", "Belarusian"),
    ("ben", "Bengali"),
    ("bho", "Bhojpuri"),
    ("bjn", "Banjar"),
    ("bod", "Tibetan"),
    ("bos", "Bosnian"),
    ("bpy", "Bishnupriya"),
    ("bre", "Breton"),
    ("bul", "Bulgarian"),
    ("bxr", "Buryat"),
    ("cat", "Catalan"),
    ("cbk", "Chavacano"),
    ("cdo", "Min Dong"),
    ("ceb", "Cebuano"),
    ("ces", "Czech"),
    ("che", "Chechen"),
    ("chr", "Cherokee"),
    ("chv", "Chuvash"),
    ("ckb", "Central Kurdish"),
    ("cor", "Cornish"),
    ("cos", "Corsican"),
    ("crh", "Crimean Tatar"),
    ("csb", "Kashubian"),
    ("cym", "Welsh"),
    ("dan", "Danish"),
    ("deu", "German"),
    ("diq", "Dimli"),
    ("div", "Dhivehi"),
    ("dsb", "Lower Sorbian"),
    ("dty", "Doteli"),
    ("egl", "Emilian"),
    ("ell", "Modern Greek"),
    ("eng", "English"),
    ("epo", "Esperanto"),
    ("est", "Estonian"),
    ("eus", "Basque"),
    ("ext", "Extremaduran"),
    ("fao", "Faroese"),
    ("fas", "Persian"),
    ("fin", "Finnish"),
    ("fra", "French"),
    ("frp", "Arpitan"),
    ("fry", "Western Frisian"),
    ("fur", "Friulian"),
    ("gag", "Gagauz"),
    ("gla", "Scottish Gaelic"),
    ("gle", "Irish"),
    ("glg", "Galician"),
    ("glk", "Gilaki"),
    ("glv", "Manx"),
    ("grn", "Guarani"),
    ("guj", "Gujarati"),
    ("hak", "Hakka Chinese"),
    ("hat", "Haitian Creole"),
    ("hau", "Hausa"),
    ("hbs", "Serbo-Croatian"),
    ("heb", "Hebrew"),
    ("hif", "Fiji Hindi"),
    ("hin", "Hindi"),
    ("hrv", "Croatian"),
    ("hsb", "Upper Sorbian"),
    ("hun", "Hungarian"),
    ("hye", "Armenian"),
    ("ibo", "Igbo"),
    ("ido", "Ido"),
    ("ile", "Interlingue"),
    ("ilo", "Iloko"),
    ("ina", "Interlingua"),
    ("ind", "Indonesian"),
    ("isl", "Icelandic"),
    ("ita", "Italian"),
    ("jam", "Jamaican Patois"),
    ("jav", "Javanese"),
    ("jbo", "Lojban"),
    ("jpn", "Japanese"),
    ("kaa", "Karakalpak"),
    ("kab", "Kabyle"),
    ("kan", "Kannada"),
    ("kat", "Georgian"),
    ("kaz", "Kazakh"),
    ("kbd", "Kabardian"),
    ("khm", "Central Khmer"),
    ("kin", "Kinyarwanda"),
    ("kir", "Kirghiz"),
    ("koi", "Komi-Permyak"),
    ("kok", "Konkani"),
    ("kom", "Komi"),
    ("kor", "Korean"),
    ("krc", "Karachay-Balkar"),
    ("ksh", "Ripuarisch"),
    ("kur", "Kurdish"),
    ("lad", "Ladino"),
    ("lao", "Lao"),
    ("lat", "Latin"),
    ("lav", "Latvian"),
    ("lez", "Lezghian"),
    ("lij", "Ligurian"),
    ("lim", "Limburgan"),
    ("lin", "Lingala"),
    ("lit", "Lithuanian"),
    ("lmo", "Lombard"),
    ("lrc", "Northern Luri"),
    ("ltg", "Latgalian"),
    ("ltz", "Luxembourgish"),
    ("lug", "Luganda"),
    ("lzh", "Literary Chinese"),
    ("mai", "Maithili"),
    ("mal", "Malayalam"),
    ("map-bms", "Banyumasan"),
    ("mar", "Marathi"),
    ("mdf", "Moksha"),
    ("mhr", "Eastern Mari"),
    ("min", "Minangkabau"),
    ("mkd", "Macedonian"),
    ("mlg", "Malagasy"),
    ("mlt", "Maltese"),
    ("mon", "Mongolian"),
    ("mri", "Maori"),
    ("mrj", "Western Mari"),
    ("msa", "Malay"),
    ("mwl", "Mirandese"),
    ("mya", "Burmese"),
    ("myv", "Erzya"),
    ("mzn", "Mazanderani"),
    ("nan", "Min Nan Chinese"),
    ("nap", "Neapolitan"),
    ("nav", "Navajo"),
    ("nci", "Classical Nahuatl"),
    ("nds", "Low German"),
    ("nds-nl", "West Low German"),
    ("nep", "Nepali (macrolanguage)"),
    ("new", "Newari"),
    ("nld", "Dutch"),
    ("nno", "Norwegian Nynorsk"),
    ("nob", "Bokmål"),
    ("nrm", "Narom"),
    ("nso", "Northern Sotho"),
    ("oci", "Occitan"),
    ("olo", "Livvi-Karelian"),
    ("ori", "Oriya"),
    ("orm", "Oromo"),
    ("oss", "Ossetian"),
    ("pag", "Pangasinan"),
    ("pam", "Pampanga"),
    ("pan", "Panjabi"),
    ("pap", "Papiamento"),
    ("pcd", "Picard"),
    ("pdc", "Pennsylvania German"),
    ("pfl", "Palatine German"),
    ("pnb", "Western Panjabi"),
    ("pol", "Polish"),
    ("por", "Portuguese"),
    ("pus", "Pushto"),
    ("que", "Quechua"),
    ("roa-tara", "Tarantino dialect"),
    ("roh", "Romansh"),
    ("ron", "Romanian"),
    ("rue", "Rusyn"),
    ("rup", "Aromanian"),
    ("rus", "Russian"),
    ("sah", "Yakut"),
    ("san", "Sanskrit"),
    ("scn", "Sicilian"),
    ("sco", "Scots"),
    ("sgs", "Samogitian"),
    ("sin", "Sinhala"),
    ("slk", "Slovak"),
    ("slv", "Slovene"),
    ("sme", "Northern Sami"),
    ("sna", "Shona"),
    ("snd", "Sindhi"),
    ("som", "Somali"),
    ("spa", "Spanish"),
    ("sqi", "Albanian"),
    ("srd", "Sardinian"),
    ("srn", "Sranan"),
    ("srp", "Serbian"),
    ("stq", "Saterfriesisch"),
    ("sun", "Sundanese"),
    ("swa", "Swahili (macrolanguage)"),
    ("swe", "Swedish"),
    ("szl", "Silesian"),
    ("tam", "Tamil"),
    ("tat", "Tatar"),
    ("tcy", "Tulu"),
    ("tel", "Telugu"),
    ("tet", "Tetum"),
    ("tgk", "Tajik"),
    ("tgl", "Tagalog"),
    ("tha", "Thai"),
    ("ton", "Tongan"),
    ("tsn", "Tswana"),
    ("tuk", "Turkmen"),
    ("tur", "Turkish"),
    ("tyv", "Tuvan"),
    ("udm", "Udmurt"),
    ("uig", "Uighur"),
    ("ukr", "Ukrainian"),
    ("urd", "Urdu"),
    ("uzb", "Uzbek"),
    ("vec", "Venetian"),
    ("vep", "Veps"),
    ("vie", "Vietnamese"),
    ("vls", "Vlaams"),
    ("vol", "Volapük"),
    ("vro", "Võro"),
    ("war", "Waray"),
    ("wln", "Walloon"),
    ("wol", "Wolof"),
    ("wuu", "Wu Chinese"),
    ("xho", "Xhosa"),
    ("xmf", "Mingrelian"),
    ("yid", "Yiddish"),
    ("yor", "Yoruba"),
    ("zea", "Zeeuws"),
    ("zh-yue", "Cantonese"),
    ("zho", "Chinese"),
];
