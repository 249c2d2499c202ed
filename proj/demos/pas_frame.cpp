// Shapes one 4D frame end to end: random indices -> K-ESS amplitudes -> signs
// -> dual-polarization symbols with Gray labels, then back to the indices.

#include "klss/kess.hpp"
#include "klss/analytics.hpp"
#include "klss/pas.hpp"

#include <iostream>
#include <random>

using namespace klss;

int main()
{
    const AmplitudeAlphabet alphabet(3);
    const auto t = build_kess_trellis(108, alphabet, 1156, 16556);
    const unsigned k = *t.input_bits();
    std::cout << "N=108, E_max=1156, K_max=16556: " << t.node_count() << " nodes, k=" << k << " bits\n";

    std::mt19937_64 rng(7);
    const BigCount index = random_index(rng, k);
    const auto amplitudes = kess_encode(t, index);
    std::vector<int> signs(amplitudes.size());
    for (auto& s : signs) s = rng() % 2 ? 1 : -1;
    const std::vector<std::vector<int>> stream{pas::apply_signs(amplitudes, pas::SignSequence(signs))};

    const auto frame = pas::map_symbols(stream, pas::MappingStrategy::four_d, alphabet);
    std::cout << "index " << index << "\nfirst symbols (x, y) with Gray labels:\n";
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& d = frame.symbols[i].dims;
        std::cout << "  (" << d[0] << (d[1] < 0 ? "" : "+") << d[1] << "j, " << d[2] << (d[3] < 0 ? "" : "+") << d[3]
                  << "j)  ";
        for (int v : d) std::cout << pas::to_bit_string(pas::gray_label(v, alphabet), 3) << ' ';
        std::cout << '\n';
    }

    const auto back = pas::unmap_symbols(frame);
    const BigCount decoded = kess_decode(t, pas::amplitudes_of(back.front()));
    const auto st = frame.stats();
    std::cout << "frame energy " << st.energy << ", kurtosis sum " << st.kurtosis_sum << ", decoded index "
              << (decoded == index ? "matches" : "DIFFERS") << '\n';
    return decoded == index ? 0 : 1;
}
