#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace medrank {

enum class EntityType : uint8_t { Symptom, Test, TestResult, Disease, Treatment };

enum class Modifier : uint8_t { Present, Absent, Possible, Other };

// The three recommendation tasks; each fixes the observed (X) entity kinds
// and the recommended (Y) kind of the bipartite subgraph.
enum class TaskKind : uint8_t { SD, DTr, ST };

struct Entity {
    std::string name;
    EntityType kind;

    auto operator<=>(const Entity&) const = default;
};

struct EntityHash {
    size_t operator()(const Entity& e) const {
        return std::hash<std::string>{}(e.name) * 31u + static_cast<size_t>(e.kind);
    }
};

std::string_view to_string(EntityType k);
std::string_view to_string(Modifier m);
std::string_view to_string(TaskKind t);

EntityType entity_type_from_string(std::string_view s);   // throws on unknown
Modifier modifier_from_string(std::string_view s);        // unknown -> Other
TaskKind task_from_string(std::string_view s);            // throws on unknown

std::vector<EntityType> x_kinds(TaskKind t);
EntityType y_kind(TaskKind t);

}  // namespace medrank
