#include "medrank/types.hpp"

namespace medrank {

std::string_view to_string(EntityType k) {
    switch (k) {
        case EntityType::Symptom: return "symptom";
        case EntityType::Test: return "test";
        case EntityType::TestResult: return "test_result";
        case EntityType::Disease: return "disease";
        case EntityType::Treatment: return "treatment";
    }
    return "?";
}

std::string_view to_string(Modifier m) {
    switch (m) {
        case Modifier::Present: return "present";
        case Modifier::Absent: return "absent";
        case Modifier::Possible: return "possible";
        case Modifier::Other: return "other";
    }
    return "?";
}

std::string_view to_string(TaskKind t) {
    switch (t) {
        case TaskKind::SD: return "sd";
        case TaskKind::DTr: return "dtr";
        case TaskKind::ST: return "st";
    }
    return "?";
}

EntityType entity_type_from_string(std::string_view s) {
    if (s == "symptom") return EntityType::Symptom;
    if (s == "test") return EntityType::Test;
    if (s == "test_result") return EntityType::TestResult;
    if (s == "disease") return EntityType::Disease;
    if (s == "treatment") return EntityType::Treatment;
    throw std::runtime_error("unknown entity kind: " + std::string(s));
}

Modifier modifier_from_string(std::string_view s) {
    if (s == "present") return Modifier::Present;
    if (s == "absent") return Modifier::Absent;
    if (s == "possible") return Modifier::Possible;
    return Modifier::Other;
}

TaskKind task_from_string(std::string_view s) {
    if (s == "sd") return TaskKind::SD;
    if (s == "dtr") return TaskKind::DTr;
    if (s == "st") return TaskKind::ST;
    throw std::runtime_error("unknown task: " + std::string(s));
}

std::vector<EntityType> x_kinds(TaskKind t) {
    switch (t) {
        case TaskKind::SD: return {EntityType::Symptom, EntityType::TestResult};
        case TaskKind::DTr: return {EntityType::Disease};
        case TaskKind::ST: return {EntityType::Symptom};
    }
    return {};
}

EntityType y_kind(TaskKind t) {
    switch (t) {
        case TaskKind::SD: return EntityType::Disease;
        case TaskKind::DTr: return EntityType::Treatment;
        case TaskKind::ST: return EntityType::Test;
    }
    return EntityType::Disease;
}

}  // namespace medrank
