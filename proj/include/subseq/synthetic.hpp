#pragma once

#include <cstdint>

#include "subseq/distance.hpp"
#include "subseq/sequence.hpp"

namespace subseq {

// Uniform random strings over an alphabet of `alphabet_size` letters starting
// at 'A'. Lengths drawn uniformly from [len_lo, len_hi].
Dataset gen_uniform_strings(std::uint64_t seed, std::size_t count, std::size_t len_lo,
                            std::size_t len_hi, int alphabet_size);

// Clustered 1-3 dim random walks: `clusters` prototype walks with step size
// `step`, each sequence a prototype plus uniform noise of magnitude `noise`.
Dataset gen_clustered_walks(std::uint64_t seed, std::size_t count, std::size_t len, int dims,
                            std::size_t clusters, double step, double noise);

struct PlantedInstance {
  Dataset db;
  Sequence query;
  Span query_plant;  // motif location inside the query
  Span db_plant;     // motif location inside one database sequence
  std::uint32_t db_index = 0;
};

// Injects one shared motif of length `motif_len` into the query and into one
// database sequence. For strings noise_budget random substitutions are applied
// to each copy; for series every element is perturbed by at most noise_budget
// in a single coordinate, so the copy stays within noise_budget of the motif
// under ERP/DFD-style costs.
PlantedInstance gen_planted_motif(std::uint64_t seed, const DistanceSpec& spec,
                                  std::size_t db_sequences, std::size_t seq_len,
                                  std::size_t query_len, std::size_t motif_len,
                                  double noise_budget, int alphabet_size = 8);

}  // namespace subseq
