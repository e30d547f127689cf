#include "battleship/candidates.hpp"

#include <sstream>

#include "battleship/errors.hpp"

namespace battleship {

namespace {

// Scoring work for one candidate; never throws for per-record failures.
CandidateRecord score_one(const RawCandidate& raw,
                          const HypothesisSpace& space) {
  CandidateRecord rec;
  rec.question = raw.question;
  if (rec.question) rec.word_count = count_words(*rec.question);
  rec.program = raw.program;
  rec.program_text = raw.program_text;
  rec.error = raw.error;

  if (!raw.program) {
    if (rec.error.empty()) rec.error = "no program";
    return rec;
  }
  if (rec.program_text.empty()) rec.program_text = pretty_print(*raw.program);
  rec.depth = ast_depth(*raw.program);
  rec.size = ast_size(*raw.program);

  try {
    (void)top_level_type(*raw.program);  // rejects set-valued programs
    const double bits = eig(*raw.program, space);
    rec.valid = true;
    rec.eig_bits = bits;
    rec.informative = bits > 0.0;
    rec.error.clear();
  } catch (const Error& e) {
    rec.error = e.what();
  }
  return rec;
}

void stamp(std::vector<CandidateRecord>& records,
           const std::string& provenance) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].provenance = provenance;
    records[i].index = i;
  }
}

// Argmax of eig_bits over the valid records among `members`, ties broken
// uniformly. Returns the winning member slot, or nullopt if none is valid.
std::optional<std::size_t> argmax_member(
    const std::vector<CandidateRecord>& records,
    const std::vector<std::size_t>& members, Rng& rng) {
  std::vector<std::size_t> best;
  double best_eig = 0.0;
  for (std::size_t idx : members) {
    const CandidateRecord& rec = records[idx];
    if (!rec.valid) continue;
    if (best.empty() || *rec.eig_bits > best_eig) {
      best.assign(1, idx);
      best_eig = *rec.eig_bits;
    } else if (*rec.eig_bits == best_eig) {
      best.push_back(idx);
    }
  }
  if (best.empty()) return std::nullopt;
  if (best.size() == 1) return best[0];
  return best[random_below(rng, best.size())];
}

}  // namespace

ProposalKind parse_proposal_kind(const std::string& text) {
  if (text == "grammar") return ProposalKind::Grammar;
  if (text == "llm") return ProposalKind::Llm;
  throw InputError("unknown proposal kind: " + text +
                   " (expected grammar or llm)");
}

const char* proposal_kind_name(ProposalKind kind) {
  return kind == ProposalKind::Grammar ? "grammar" : "llm";
}

void RunConfig::validate() const {
  if (k < 1) throw InputError("k must be at least 1");
  if (board_id.empty()) throw InputError("run config needs a board id");
}

int count_words(const std::string& text) {
  std::istringstream in(text);
  std::string token;
  int count = 0;
  while (in >> token) ++count;
  return count;
}

std::vector<CandidateRecord> score_candidates_serial(
    const std::vector<RawCandidate>& raw, const HypothesisSpace& space,
    const std::string& provenance) {
  if (space.empty()) throw InputError("hypothesis space is empty");
  std::vector<CandidateRecord> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = score_one(raw[i], space);
  stamp(out, provenance);
  return out;
}

std::vector<CandidateRecord> score_candidates(
    const std::vector<RawCandidate>& raw, const HypothesisSpace& space,
    const std::string& provenance) {
  if (space.empty()) throw InputError("hypothesis space is empty");
  std::vector<CandidateRecord> out(raw.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = score_one(raw[i], space);
  stamp(out, provenance);
  return out;
}

Selection select_best(const std::vector<CandidateRecord>& records, Rng& rng) {
  if (records.empty()) throw InputError("cannot select from zero candidates");
  std::vector<std::size_t> all(records.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto winner = argmax_member(records, all, rng);
  if (!winner) return {};
  return {true, *winner};
}

BucketEstimate bucketize_estimate(const std::vector<CandidateRecord>& records,
                                  std::size_t k, Rng& rng) {
  if (k == 0) throw InputError("bucket size must be at least 1");
  if (records.size() < k)
    throw InputError("bucket size " + std::to_string(k) + " exceeds the " +
                     std::to_string(records.size()) + " records");

  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle(order, rng);

  BucketEstimate est;
  est.k = k;
  const std::size_t n_buckets = records.size() / k;
  est.buckets.reserve(n_buckets);
  double total = 0.0;
  for (std::size_t b = 0; b < n_buckets; ++b) {
    BucketOutcome bucket;
    bucket.members.assign(order.begin() + static_cast<std::ptrdiff_t>(b * k),
                          order.begin() + static_cast<std::ptrdiff_t>((b + 1) * k));
    const auto winner = argmax_member(records, bucket.members, rng);
    if (winner) {
      bucket.any_valid = true;
      bucket.winner = *winner;
      bucket.eig_bits = *records[*winner].eig_bits;
    } else {
      ++est.invalid_buckets;
    }
    total += bucket.eig_bits;
    est.buckets.push_back(std::move(bucket));
  }
  est.mean_eig = total / static_cast<double>(n_buckets);
  return est;
}

}  // namespace battleship
