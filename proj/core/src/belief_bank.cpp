#include "beliefbank/belief_bank.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace beliefbank {
namespace {

constexpr const char* kHeader = "beliefbank-v1";

std::string format_weight(double w) {
    std::ostringstream os;
    os << std::setprecision(17) << w;
    return os.str();
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

bool parse_label(const std::string& file, std::size_t line_no, const std::string& s) {
    if (s == "T") return true;
    if (s == "F") return false;
    throw ParseError(file, line_no, "label must be T or F, got '" + s + "'");
}

double parse_weight(const std::string& file, std::size_t line_no, const std::string& s) {
    try {
        std::size_t pos = 0;
        double w = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return w;
    } catch (const std::exception&) {
        throw ParseError(file, line_no, "bad weight '" + s + "'");
    }
}

}  // namespace

void BeliefBank::upsert(const Belief& b) {
    if (!(b.weight >= 0.0 && b.weight <= 1.0))
        throw Error("belief weight must lie in [0,1], got " + std::to_string(b.weight) +
                    " for " + b.key.str());
    if (b.provenance == Provenance::human && b.weight != 1.0)
        throw Error("human beliefs must carry weight 1.0: " + b.key.str());
    if (b.key.entity.empty()) throw Error("belief entity must be non-empty");
    if (b.key.entity.find_first_of(" \t\n") != std::string::npos)
        throw Error("belief entity must not contain whitespace: '" + b.key.entity + "'");
    if (registry_ && !registry_->contains(b.key.template_id))
        throw Error("unknown template id '" + b.key.template_id + "' for entity '" +
                    b.key.entity + "'");

    auto it = beliefs_.find(b.key);
    std::optional<bool> old;
    if (it != beliefs_.end()) old = it->second.label;
    log_.push_back(RevisionEntry{old, b});
    if (it != beliefs_.end())
        it->second = b;
    else
        beliefs_.emplace(b.key, b);
}

const Belief* BeliefBank::find(const SentenceKey& key) const {
    auto it = beliefs_.find(key);
    return it == beliefs_.end() ? nullptr : &it->second;
}

std::vector<Belief> BeliefBank::beliefs_about(const std::string& entity) const {
    std::vector<Belief> out;
    // Keys sort by (entity, template_id), so the entity's range is contiguous
    // and already in template_id order.
    for (auto it = beliefs_.lower_bound(SentenceKey{entity, ""}); it != beliefs_.end(); ++it) {
        if (it->first.entity != entity) break;
        out.push_back(it->second);
    }
    return out;
}

void BeliefBank::save(std::ostream& out) const {
    out << kHeader << "\n";
    for (const auto& [key, b] : beliefs_) {
        out << "b\t" << key.entity << '\t' << key.template_id << '\t' << (b.label ? 'T' : 'F')
            << '\t' << format_weight(b.weight) << '\t' << provenance_name(b.provenance) << '\t'
            << b.batch_index << "\n";
    }
    for (const RevisionEntry& e : log_) {
        out << "r\t" << e.after.key.entity << '\t' << e.after.key.template_id << '\t'
            << (e.old_label ? (*e.old_label ? "T" : "F") : "-") << '\t'
            << (e.after.label ? 'T' : 'F') << '\t' << format_weight(e.after.weight) << '\t'
            << provenance_name(e.after.provenance) << '\t' << e.after.batch_index << "\n";
    }
}

void BeliefBank::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    save(out);
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

BeliefBank BeliefBank::load(std::istream& in, const std::string& name, TemplateRegistryPtr registry) {
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw ParseError(name, 1, "empty file");
    ++line_no;
    if (line != kHeader) throw ParseError(name, 1, "expected header '" + std::string(kHeader) + "'");

    std::map<SentenceKey, Belief> beliefs;
    std::vector<RevisionEntry> log;
    bool saw_log = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_tabs(line);
        if (fields[0] == "b") {
            if (fields.size() != 7) throw ParseError(name, line_no, "belief line needs 7 fields");
            Belief b;
            b.key = SentenceKey{fields[1], fields[2]};
            b.label = parse_label(name, line_no, fields[3]);
            b.weight = parse_weight(name, line_no, fields[4]);
            auto prov = provenance_from_name(fields[5]);
            if (!prov) throw ParseError(name, line_no, "bad provenance '" + fields[5] + "'");
            b.provenance = *prov;
            try {
                b.batch_index = std::stoi(fields[6]);
            } catch (const std::exception&) {
                throw ParseError(name, line_no, "bad batch index '" + fields[6] + "'");
            }
            if (!beliefs.emplace(b.key, b).second)
                throw ParseError(name, line_no, "duplicate belief for " + b.key.str());
        } else if (fields[0] == "r") {
            if (fields.size() != 8) throw ParseError(name, line_no, "revision line needs 8 fields");
            saw_log = true;
            RevisionEntry e;
            e.after.key = SentenceKey{fields[1], fields[2]};
            if (fields[3] == "-")
                e.old_label = std::nullopt;
            else
                e.old_label = parse_label(name, line_no, fields[3]);
            e.after.label = parse_label(name, line_no, fields[4]);
            e.after.weight = parse_weight(name, line_no, fields[5]);
            auto prov = provenance_from_name(fields[6]);
            if (!prov) throw ParseError(name, line_no, "bad provenance '" + fields[6] + "'");
            e.after.provenance = *prov;
            try {
                e.after.batch_index = std::stoi(fields[7]);
            } catch (const std::exception&) {
                throw ParseError(name, line_no, "bad batch index '" + fields[7] + "'");
            }
            log.push_back(std::move(e));
        } else {
            throw ParseError(name, line_no, "unknown record type '" + fields[0] + "'");
        }
    }

    BeliefBank bank(std::move(registry));
    if (saw_log) {
        bank = replay(log, bank.registry_);
        if (bank.beliefs_ != beliefs || bank.log_ != log)
            throw ParseError(name, line_no, "revision log does not replay to the stored beliefs");
    } else {
        // Bank written without history (e.g. hand-authored): synthesize one
        // insert per belief so the replay invariant still holds.
        for (const auto& [key, b] : beliefs) bank.upsert(b);
    }
    return bank;
}

BeliefBank BeliefBank::load(const std::filesystem::path& path, TemplateRegistryPtr registry) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    return load(in, path.string(), std::move(registry));
}

BeliefBank BeliefBank::replay(const std::vector<RevisionEntry>& log, TemplateRegistryPtr registry) {
    BeliefBank bank(std::move(registry));
    for (const RevisionEntry& e : log) bank.upsert(e.after);
    return bank;
}

}  // namespace beliefbank
