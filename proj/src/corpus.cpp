#include "medrank/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "medrank/rng.hpp"

namespace medrank::corpus {

double assignment_value(Modifier m) {
    switch (m) {
        case Modifier::Present: return 1.0;
        case Modifier::Absent: return -1.0;
        case Modifier::Possible: return 0.5;
        case Modifier::Other: return 0.5;
    }
    return 0.5;
}

int gold_label(Modifier m) { return m == Modifier::Absent ? 0 : 1; }

namespace {

std::vector<std::string> split_fields(const std::string& line, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

[[noreturn]] void parse_fail(size_t line_no, const std::string& what) {
    throw std::runtime_error("parse error at line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Corpus parse_corpus(std::istream& in, std::string provenance) {
    Corpus c;
    c.provenance = std::move(provenance);
    std::unordered_set<std::string> seen_ids;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_fields(line, '\t');
        Record rec;
        rec.id = fields[0];
        if (rec.id.empty()) parse_fail(line_no, "empty record id");
        if (!seen_ids.insert(rec.id).second)
            parse_fail(line_no, "duplicate record id '" + rec.id + "'");
        // Duplicate entities within one record keep the strongest assertion
        // (largest assignment value).
        std::unordered_map<Entity, size_t, EntityHash> index;
        for (size_t i = 1; i < fields.size(); ++i) {
            auto parts = split_fields(fields[i], '|');
            if (parts.size() != 3)
                parse_fail(line_no, "mention '" + fields[i] + "' is not name|kind|modifier");
            if (parts[0].empty()) parse_fail(line_no, "empty entity name");
            Entity ent{parts[0], EntityType{}};
            try {
                ent.kind = entity_type_from_string(parts[1]);
            } catch (const std::exception& e) {
                parse_fail(line_no, e.what());
            }
            Modifier mod = modifier_from_string(parts[2]);
            auto it = index.find(ent);
            if (it == index.end()) {
                index.emplace(ent, rec.mentions.size());
                rec.mentions.push_back({ent, mod});
            } else {
                Mention& kept = rec.mentions[it->second];
                if (assignment_value(mod) > assignment_value(kept.modifier)) kept.modifier = mod;
            }
        }
        c.records.push_back(std::move(rec));
    }
    return c;
}

Corpus load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    return parse_corpus(in, path);
}

void serialize_corpus(const Corpus& c, std::ostream& out) {
    for (const auto& rec : c.records) {
        out << rec.id;
        for (const auto& m : rec.mentions)
            out << '\t' << m.entity.name << '|' << to_string(m.entity.kind) << '|'
                << to_string(m.modifier);
        out << '\n';
    }
}

void save_corpus(const Corpus& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write corpus file: " + path);
    serialize_corpus(c, out);
}

std::pair<Corpus, Corpus> split_corpus(const Corpus& c, uint64_t seed, size_t n_train) {
    if (n_train == 0 || n_train >= c.records.size())
        throw std::runtime_error("n_train must be in (0, corpus size)");
    std::vector<size_t> order(c.records.size());
    std::iota(order.begin(), order.end(), size_t{0});
    auto rng = substream(seed, "split");
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<bool> in_train(c.records.size(), false);
    for (size_t i = 0; i < n_train; ++i) in_train[order[i]] = true;
    Corpus train, test;
    train.provenance = c.provenance + "/train";
    test.provenance = c.provenance + "/test";
    for (size_t i = 0; i < c.records.size(); ++i)
        (in_train[i] ? train : test).records.push_back(c.records[i]);
    return {std::move(train), std::move(test)};
}

InstanceSet make_instances(const Corpus& c, TaskKind task) {
    const auto xs = x_kinds(task);
    const auto yk = y_kind(task);
    auto is_x_kind = [&xs](EntityType k) {
        return std::find(xs.begin(), xs.end(), k) != xs.end();
    };
    InstanceSet out;
    for (const auto& rec : c.records) {
        Instance inst;
        inst.record_id = rec.id;
        bool pos_x = false, pos_y = false;
        for (const auto& m : rec.mentions) {
            if (is_x_kind(m.entity.kind)) {
                double v = assignment_value(m.modifier);
                inst.x.emplace_back(m.entity, v);
                if (v > 0) pos_x = true;
            } else if (m.entity.kind == yk) {
                int g = gold_label(m.modifier);
                inst.gold.emplace_back(m.entity, g);
                if (g == 1) pos_y = true;
            }
        }
        if (!pos_x || !pos_y) {
            ++out.dropped;
            continue;
        }
        out.instances.push_back(std::move(inst));
    }
    return out;
}

FilterResult filter_test_instances(const std::vector<Instance>& instances,
                                   const std::vector<Entity>& known_x) {
    std::unordered_set<Entity, EntityHash> known(known_x.begin(), known_x.end());
    FilterResult out;
    for (const auto& inst : instances) {
        size_t unknown = 0;
        for (const auto& [e, v] : inst.x)
            if (!known.count(e)) ++unknown;
        if (2 * unknown > inst.x.size()) {  // strictly more than half
            ++out.dropped;
            continue;
        }
        Instance kept = inst;
        std::erase_if(kept.x, [&known](const auto& p) { return !known.count(p.first); });
        out.instances.push_back(std::move(kept));
    }
    return out;
}

}  // namespace medrank::corpus
