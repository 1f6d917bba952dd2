#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bwtdisk {

// Suffix array by induced sorting (SA-IS). `text` must end with a unique
// smallest symbol 0; every symbol is < alphabet_size. Returns 0-based
// starting positions in lexicographic order.
std::vector<std::uint32_t> suffix_array_sais(std::span<const std::uint32_t> text, std::uint32_t alphabet_size);

}  // namespace bwtdisk
