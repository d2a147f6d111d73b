#pragma once

// Frozen reference values produced by tests/oracles/stylometry_oracle.py.

#include <array>
#include <cstddef>

struct StylometryCase {
    const char* language;
    const char* text;
    std::size_t words;
    std::size_t sentences;
    std::size_t syllables;
    double yules_k;
    double entropy;
    double flesch_kincaid;
};

inline constexpr std::array<StylometryCase, 20> kStylometryCases{{
    {"en", "A happy yellow dog ran over the lazy brown kitten.", 10, 1, 15, 0, 3.3219280948873622, 6.0099999999999998},
    {"en", "One two three four five six seven eight.", 8, 1, 9, 0, 3, 0.80500000000000005},
    {"en", "the cat the cat the cat the cat", 8, 1, 8, 3750, 1, -0.67000000000000004},
    {"en", "Alpha beta. Gamma delta! Alpha beta? Gamma delta.", 8, 4, 16, 1250, 2, 8.7899999999999991},
    {"en", "It was late... The bus stopped. Nobody moved!", 8, 3, 12, 0, 3, 3.1499999999999999},
    {"en", "\"Stop,\" he said. \"Now.\" She didn't.", 6, 3, 6, 0, 2.5849625007211561, -3.0099999999999998},
    {"en", "The table, the bottle and the little apple were free.", 10, 1, 14, 600, 2.8464393446710154, 4.8300000000000001},
    {"en", "Make the cake; bake the cake; take the cake.", 9, 1, 9, 1481.4814814814815, 2.1132833342948749, -0.28000000000000003},
    {"en", "In 1897 a well-known mayor of Rouen drowned in 3 feet of water.", 13, 1, 16, 236.68639053254438, 3.3927474104487847, 4.0030769230769234},
    {"en", "Yes yes yes no no maybe.", 6, 1, 6, 2222.2222222222222, 1.4591479170272448, -1.45},
    {"en", "Agree to see the tree by the sea.", 8, 1, 9, 312.5, 2.75, 0.80500000000000005},
    {"en", "Sentence one is here. Sentence two is longer than the first one was.", 13, 2, 16, 355.02958579881658, 3.238901256602631, 1.4680769230769231},
    {"fr", "Bonjour. Ça va ?", 3, 2, 4, 0, 1.5849625007211561, 0.72833333333333339},
    {"fr", "Le chat dort sur le canapé de la maison.", 9, 1, 12, 246.91358024691357, 2.9477027792200898, 3.6533333333333333},
    {"fr", "Un homme tomba dans la rivière ; on le repêcha vivant.", 10, 1, 17, 0, 3.3219280948873622, 8.3699999999999992},
    {"fr", "L'autobus était plein. Le jeune homme au long cou s'assit…", 10, 2, 16, 0, 3.3219280948873622, 5.2400000000000002},
    {"fr", "Oui, oui, oui ! Non, non. Peut-être ?", 6, 3, 8, 2222.2222222222222, 1.4591479170272448, 0.92333333333333334},
    {"fr", "À Nancy, M. Dupont, 57 ans, s'est pendu dans sa grange.", 11, 2, 15, 0, 3.4594316186372982, 2.645909090909091},
    {"fr", "Éléonore aime les œufs et le thé glacé.", 8, 1, 13, 0, 3, 6.7050000000000001},
    {"fr", "Rien rien rien rien.", 4, 1, 4, 7500, 0, -2.23},
}};
