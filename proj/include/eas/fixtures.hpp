#pragma once

#include <filesystem>
#include <vector>

#include "eas/taxonomy.hpp"

namespace eas {

// The shipped test corpus. Filenames match the CLI examples in the README.
struct FixturePaths {
  std::filesystem::path dir;

  std::filesystem::path taxonomy() const { return dir / "seed_taxonomy.json"; }
  std::filesystem::path input() const { return dir / "dialogue16.txt"; }
  std::filesystem::path input_full() const { return dir / "dialogue16_full.txt"; }
  std::filesystem::path responses() const { return dir / "dialogue16_responses.json"; }
  std::filesystem::path golden_output() const { return dir / "golden_output.txt"; }
  std::filesystem::path gold() const { return dir / "dialogue16_gold.json"; }

  static FixturePaths defaults();
};

// Cross-checks the shipped fixture set: the seed taxonomy validates, the
// response keys line up one-to-one with the chunker's output, the golden
// output holds 8 records and 25 findings and round-trips byte-identically,
// the gold codes all resolve, and the verdict list tallies 27/3/2.
// Empty result iff everything is coherent.
std::vector<Diagnostic> verify_fixture_integrity(
    const FixturePaths& paths = FixturePaths::defaults());

}  // namespace eas
