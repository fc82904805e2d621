#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hyper {

struct Triple {
  std::int32_t head = 0;
  std::int32_t relation = 0;
  std::int32_t tail = 0;

  bool operator==(const Triple&) const = default;
};

struct RawTriple {
  std::string head;
  std::string relation;
  std::string tail;

  bool operator==(const RawTriple&) const = default;
};

// One raw triple per nonempty line; fields are tab-separated and trimmed of
// surrounding whitespace. Throws on a line with a field count other than 3,
// on an empty field, and on invalid UTF-8; error messages carry the 1-based
// line number.
std::vector<RawTriple> parse_triples(std::string_view text);

std::vector<RawTriple> read_triple_file(const std::filesystem::path& path);

// Dense ids in first-seen order: train, then valid, then test; within a
// triple the head is registered before the tail.
class Vocabulary {
 public:
  std::int32_t add_entity(const std::string& name);
  std::int32_t add_relation(const std::string& name);

  std::int32_t entity_id(const std::string& name) const;    // -1 if unknown
  std::int32_t relation_id(const std::string& name) const;  // -1 if unknown

  const std::string& entity_name(std::int32_t id) const { return entity_names_.at(id); }
  const std::string& relation_name(std::int32_t id) const { return relation_names_.at(id); }

  std::int32_t n_entities() const { return static_cast<std::int32_t>(entity_names_.size()); }
  std::int32_t n_relations() const { return static_cast<std::int32_t>(relation_names_.size()); }

  const std::vector<std::string>& relation_names() const { return relation_names_; }

  bool operator==(const Vocabulary&) const = default;

 private:
  std::vector<std::string> entity_names_;
  std::vector<std::string> relation_names_;
  std::unordered_map<std::string, std::int32_t> entity_ids_;
  std::unordered_map<std::string, std::int32_t> relation_ids_;
};

enum class Split { train, valid, test };

const char* split_name(Split s);
Split split_from_name(std::string_view name);

struct Dataset {
  Vocabulary vocab;
  std::vector<Triple> train;
  std::vector<Triple> valid;
  std::vector<Triple> test;
  bool reciprocal_added = false;

  std::int32_t n_entities() const { return vocab.n_entities(); }
  std::int32_t n_relations() const { return vocab.n_relations(); }

  const std::vector<Triple>& split(Split s) const;

  // Relation count before reciprocal augmentation.
  std::int32_t n_original_relations() const {
    return reciprocal_added ? n_relations() / 2 : n_relations();
  }
};

Dataset build_dataset(const std::vector<RawTriple>& train, const std::vector<RawTriple>& valid,
                      const std::vector<RawTriple>& test);

// Reads train.txt / valid.txt / test.txt from a directory.
Dataset load_dataset(const std::filesystem::path& dir);

// Doubles n_r; appends (t, r + n_r_original, h) for every (h, r, t) in each
// split. Reciprocal relation names get a "_reverse" suffix. Throws if called
// twice or on a name collision.
void add_reciprocals(Dataset& d);

// Id-level involution over the augmented relation space.
Triple reciprocal_of(const Triple& t, std::int32_t n_relations_augmented);

// (head, relation) -> all tails true in train + valid + test.
class FilterIndex {
 public:
  static FilterIndex from_triples(std::span<const Triple> triples);
  static FilterIndex from_dataset(const Dataset& d);

  // Sorted unique tail ids; empty span for unseen keys.
  std::span<const std::int32_t> true_tails(std::int32_t head, std::int32_t relation) const;

  bool contains(const Triple& t) const;

  std::size_t n_keys() const { return map_.size(); }

 private:
  static std::uint64_t key(std::int32_t head, std::int32_t relation) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(head)) << 32) |
           static_cast<std::uint32_t>(relation);
  }
  std::unordered_map<std::uint64_t, std::vector<std::int32_t>> map_;
};

inline FilterIndex build_filter_index(const Dataset& d) { return FilterIndex::from_dataset(d); }

}  // namespace hyper
