#pragma once

#include <array>
#include <cstdint>

namespace fracspde::rng {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11 constants).
// Pure function of (counter, key): any (stream, sample, step) tuple can be
// mapped to an independent draw with no sequential state, which is what the
// reproducible parallel-substream contract rests on.
struct Philox4x32 {
  static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                            const std::array<std::uint32_t, 2>& key);
};

// Standard normal draw identified by (seed; stream, step, sample).
// Derivation: counter = (step, stream, sample, 0), key = seed split in two;
// the four output words give two U(0,1) variates fed to Box-Muller.
double normal_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t step,
                   std::uint64_t sample);

// Uniform in (0,1), same indexing (first Box-Muller input, pre-transform).
double uniform_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t step,
                    std::uint64_t sample);

} // namespace fracspde::rng
