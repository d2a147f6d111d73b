#include "styledisp/stylometry.hpp"

#include "styledisp/error.hpp"

namespace styledisp {

namespace {

// Closed-class words: determiners, prepositions, conjunctions, pronouns,
// auxiliaries and common particles. Lowercase, ASCII apostrophe.
const char* const kEnglish[] = {
    "'em", "'tis", "a", "aboard", "about", "above", "across", "after", "afterwards", "against", "ago", "ah",
    "ain't", "alas", "albeit", "all", "almost", "along", "alongside", "already", "also", "although", "always",
    "am", "amid", "amidst", "among", "amongst", "an", "an'", "and", "anew", "another", "any", "anybody",
    "anyhow", "anyone", "anything", "anyway", "anywhere", "are", "aren't", "around", "art", "as", "at", "be",
    "became", "because", "become", "becomes", "been", "before", "beforehand", "behind", "being", "below",
    "beneath", "beside", "besides", "between", "betwixt", "beyond", "both", "but", "by", "can", "can't",
    "cannot", "concerning", "considering", "could", "couldn't", "despite", "did", "didn't", "do", "does",
    "doesn't", "doing", "don't", "done", "doth", "down", "during", "e'er", "each", "either", "else",
    "elsewhere", "enough", "even", "ever", "every", "everybody", "everyone", "everything", "everywhere",
    "except", "excepting", "excluding", "few", "fewer", "following", "for", "former", "formerly", "from",
    "further", "gonna", "gotta", "had", "hadn't", "has", "hasn't", "hath", "have", "haven't", "having", "he",
    "he'd", "he'll", "he's", "hence", "her", "here", "hereafter", "hereby", "herein", "hers", "herself", "hey",
    "him", "himself", "his", "hither", "how", "however", "i", "i'd", "i'll", "i'm", "i've", "if", "in",
    "inside", "instead", "into", "is", "isn't", "it", "it's", "its", "itself", "just", "least", "less", "lest",
    "like", "lo", "many", "may", "me", "meanwhile", "might", "mightn't", "mine", "minus", "more", "moreover",
    "most", "mostly", "much", "must", "mustn't", "my", "myself", "nay", "near", "nearly", "neither", "never",
    "nevertheless", "next", "no", "nobody", "none", "noone", "nor", "not", "nothing", "notwithstanding", "now",
    "nowhere", "o'", "o'er", "of", "off", "often", "oh", "ok", "on", "once", "one", "ones", "only", "onto",
    "opposite", "or", "other", "others", "otherwise", "ought", "our", "ours", "ourselves", "out", "outside",
    "over", "own", "past", "per", "perhaps", "plus", "quite", "rather", "regarding", "round", "same", "save",
    "several", "shall", "shalt", "shan't", "she", "she'd", "she'll", "she's", "should", "shouldn't", "since",
    "so", "some", "somebody", "somehow", "someone", "something", "sometime", "sometimes", "somewhere", "such",
    "than", "that", "that's", "the", "thee", "their", "theirs", "them", "themselves", "then", "thence", "there",
    "there's", "thereafter", "thereby", "therefore", "therein", "these", "they", "they'd", "they'll", "they're",
    "they've", "thine", "this", "thither", "those", "thou", "though", "through", "throughout", "thru", "thus",
    "thy", "till", "to", "together", "too", "toward", "towards", "twas", "under", "underneath", "unless",
    "unlike", "until", "unto", "up", "upon", "us", "versus", "very", "via", "wanna", "was", "wasn't", "we",
    "we'd", "we'll", "we're", "we've", "were", "weren't", "what", "what's", "whatever", "when", "whence",
    "whenever", "where", "whereas", "whereby", "wherefore", "wherein", "whereof", "whereupon", "wherever",
    "whether", "which", "whichever", "while", "whilst", "whither", "who", "who's", "whoever", "whole", "whom",
    "whomever", "whose", "why", "will", "wilt", "with", "within", "without", "won't", "worth", "would",
    "wouldn't", "ye", "yea", "yes", "yet", "yon", "yonder", "you", "you'd", "you'll", "you're", "you've",
    "your", "yours", "yourself", "yourselves",
};

const char* const kFrench[] = {
    "a", "afin", "ah", "ai", "aie", "aient", "aies", "ainsi", "ait", "alors", "as", "assez", "au", "aucun",
    "aucune", "audit", "aujourd'hui", "auquel", "aura", "aurai", "auraient", "aurais", "aurait", "auras",
    "aurez", "auriez", "aurions", "aurons", "auront", "aussi", "aussitôt", "autant", "autour", "autre",
    "autrefois", "autres", "aux", "auxquelles", "auxquels", "avaient", "avais", "avait", "avant", "avec",
    "avez", "aviez", "avions", "avoir", "avons", "ayant", "ayez", "ayons", "bah", "beaucoup", "bientôt", "c'",
    "c'est", "c'était", "car", "ce", "ceci", "cela", "celle", "celle-ci", "celle-là", "celles", "celles-ci",
    "celles-là", "celui", "celui-ci", "celui-là", "cependant", "certain", "certaine", "certaines", "certains",
    "ces", "cet", "cette", "ceux", "ceux-ci", "ceux-là", "chacun", "chacune", "chaque", "chez", "ci", "comme",
    "comment", "concernant", "contre", "d'", "d'après", "d'un", "d'une", "dans", "davantage", "de", "dedans",
    "dehors", "depuis", "derrière", "des", "desquelles", "desquels", "dessous", "dessus", "devant", "donc",
    "dont", "dorénavant", "du", "duquel", "durant", "dès", "déjà", "eh", "elle", "elles", "en", "encore",
    "ensuite", "entre", "envers", "environ", "es", "est", "et", "eu", "eue", "eues", "eurent", "eus", "eusse",
    "eussent", "eusses", "eussiez", "eussions", "eut", "eux", "excepté", "eûmes", "eût", "eûtes", "furent",
    "fus", "fusse", "fussent", "fusses", "fussiez", "fussions", "fut", "fûmes", "fût", "fûtes", "guère",
    "hormis", "hors", "hé", "hélas", "ici", "il", "ils", "j'", "jamais", "je", "jusqu'", "jusqu'au",
    "jusqu'aux", "jusqu'à", "jusque", "l'", "l'on", "la", "laquelle", "le", "lequel", "les", "lesquelles",
    "lesquels", "leur", "leurs", "loin", "lors", "lorsqu'", "lorsqu'elle", "lorsqu'il", "lorsque", "lui", "là",
    "là-bas", "m'", "ma", "mais", "malgré", "me", "mes", "moi", "moins", "mon", "moyennant", "même", "mêmes",
    "n'", "n'est", "ne", "ni", "non", "nonobstant", "nos", "notre", "nous", "néanmoins", "nôtre", "nôtres",
    "oh", "on", "ont", "or", "ou", "oui", "outre", "où", "par", "parce", "parfois", "parmi", "partout", "pas",
    "pendant", "personne", "peu", "peut-être", "plupart", "plus", "plusieurs", "pour", "pourquoi", "pourtant",
    "presque", "près", "puis", "puisqu'", "puisqu'il", "puisque", "qu'", "qu'elle", "qu'elles", "qu'il",
    "qu'ils", "qu'on", "quand", "quant", "quasi", "que", "quel", "quelle", "quelles", "quelqu'", "quelqu'un",
    "quelqu'une", "quelque", "quelques", "quels", "qui", "quiconque", "quoi", "quoique", "rien", "s'", "s'il",
    "s'ils", "sa", "sans", "sauf", "se", "selon", "sera", "serai", "seraient", "serais", "serait", "seras",
    "serez", "seriez", "serions", "serons", "seront", "ses", "si", "sien", "sienne", "siennes", "siens",
    "sinon", "sitôt", "soi", "soient", "sois", "soit", "sommes", "son", "sont", "sous", "soyez", "soyons",
    "suis", "suivant", "sur", "t'", "ta", "tandis", "tant", "tantôt", "tard", "te", "tel", "telle", "telles",
    "tels", "tes", "toi", "ton", "touchant", "toujours", "tous", "tout", "toute", "toutes", "trop", "très",
    "tu", "tôt", "un", "une", "unes", "uns", "vers", "via", "voici", "voilà", "vos", "votre", "vous",
    "vraiment", "vu", "vôtre", "vôtres", "y", "à", "ça", "étaient", "étais", "était", "étant", "étiez",
    "étions", "été", "êtes", "être", "ô",
};

}  // namespace

FunctionWords FunctionWords::builtin(std::string_view language) {
    std::set<std::string, std::less<>> words;
    if (language == "en") {
        words.insert(std::begin(kEnglish), std::end(kEnglish));
    } else if (language == "fr") {
        words.insert(std::begin(kFrench), std::end(kFrench));
    } else {
        throw InvalidArgument("no built-in function-word list for language \"" + std::string(language) + "\"");
    }
    return FunctionWords(std::move(words));
}

}  // namespace styledisp
