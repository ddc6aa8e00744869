#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "medrank/types.hpp"

namespace medrank::corpus {

struct Mention {
    Entity entity;
    Modifier modifier;
};

struct Record {
    std::string id;
    std::vector<Mention> mentions;  // unique entities, order of first appearance
};

struct Corpus {
    std::vector<Record> records;
    std::string provenance;
};

// Numeric assignment of a mention per its modifier; unmentioned entities are 0.
double assignment_value(Modifier m);

// Binary relevance label: 0 only for absent.
int gold_label(Modifier m);

// One record projected onto a task: observed X entities with assignment
// values, and Y entities with gold labels.
struct Instance {
    std::string record_id;
    std::vector<std::pair<Entity, double>> x;    // assignment values, nonzero
    std::vector<std::pair<Entity, int>> gold;    // 0/1 labels over Y-kind entities
};

struct InstanceSet {
    std::vector<Instance> instances;
    size_t dropped = 0;   // records with no positive X or no positive Y
};

// Record file: `id<TAB>name|kind|modifier(<TAB>...)*`; '#' lines and blank
// lines ignored. Throws std::runtime_error with the line number on a bad line.
Corpus parse_corpus(std::istream& in, std::string provenance = "");
Corpus load_corpus(const std::string& path);
void serialize_corpus(const Corpus& c, std::ostream& out);
void save_corpus(const Corpus& c, const std::string& path);

// Seeded uniform partition; train gets exactly n_train records.
std::pair<Corpus, Corpus> split_corpus(const Corpus& c, uint64_t seed, size_t n_train);

InstanceSet make_instances(const Corpus& c, TaskKind task);

// Drops instances whose X entities are more than half unknown; strips unknown
// X entities from the survivors. known_x is x-vocabulary membership test.
struct FilterResult {
    std::vector<Instance> instances;
    size_t dropped = 0;
};
FilterResult filter_test_instances(const std::vector<Instance>& instances,
                                   const std::vector<Entity>& known_x);

}  // namespace medrank::corpus
