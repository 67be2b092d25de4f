// Copyright 2026 The qstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qstream/decomp_table.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>

#include "qstream/errors.h"

namespace qstream {

char seq_letter_char(SeqLetter l) {
    switch (l) {
        case SeqLetter::T:
            return 'T';
        case SeqLetter::Tdg:
            return 't';
        case SeqLetter::S:
            return 'S';
        case SeqLetter::Sdg:
            return 's';
        case SeqLetter::H:
            return 'H';
        case SeqLetter::X:
            return 'X';
        case SeqLetter::Z:
            return 'Z';
    }
    return '?';
}

std::optional<SeqLetter> seq_letter_from_char(char c) {
    switch (c) {
        case 'T':
            return SeqLetter::T;
        case 't':
            return SeqLetter::Tdg;
        case 'S':
            return SeqLetter::S;
        case 's':
            return SeqLetter::Sdg;
        case 'H':
            return SeqLetter::H;
        case 'X':
            return SeqLetter::X;
        case 'Z':
            return SeqLetter::Z;
        default:
            return std::nullopt;
    }
}

std::string sequence_to_string(const std::vector<SeqLetter> &seq) {
    std::string s;
    for (auto l : seq) {
        s.push_back(seq_letter_char(l));
    }
    return s;
}

std::vector<SeqLetter> sequence_from_string(std::string_view text) {
    std::vector<SeqLetter> out;
    for (char c : text) {
        auto l = seq_letter_from_char(c);
        if (!l) {
            throw ConfigError(std::string("bad sequence letter '") + c + "'");
        }
        out.push_back(*l);
    }
    return out;
}

std::string angle_tag(double theta, double epsilon) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.17g@%.17g", theta, epsilon);
    return buf;
}

namespace {

const char *BUILTIN_TAGS[8] = {"0", "pi/4", "pi/2", "3pi/4", "pi", "5pi/4", "3pi/2", "7pi/4"};
const char *BUILTIN_SEQS[8] = {"ZZ", "T", "S", "ST", "Z", "ZT", "s", "t"};

std::optional<uint32_t> exact_multiple(double theta) {
    double q = std::numbers::pi / 4;
    double m = std::round(theta / q);
    if (std::abs(theta - m * q) > DecompositionTable::EXACT_TOLERANCE) {
        return std::nullopt;
    }
    long long mi = (long long)m % 8;
    if (mi < 0) {
        mi += 8;
    }
    return (uint32_t)mi;
}

}  // namespace

DecompositionTable::DecompositionTable() {
    for (uint32_t m = 0; m < NUM_BUILTIN; m++) {
        DecompositionEntry e;
        e.key = m;
        e.angle_tag = BUILTIN_TAGS[m];
        e.theta = m * std::numbers::pi / 4;
        e.epsilon = 0;
        e.sequence = sequence_from_string(BUILTIN_SEQS[m]);
        entries_[m] = e;
        by_tag_[e.angle_tag] = m;
    }
}

DecompositionTable::DecompositionTable(const DecompositionTable &other) {
    std::shared_lock lock(other.mu_);
    entries_ = other.entries_;
    by_tag_ = other.by_tag_;
    next_key_ = other.next_key_;
}

DecompositionTable &DecompositionTable::operator=(const DecompositionTable &other) {
    if (this != &other) {
        std::scoped_lock lock(mu_, other.mu_);
        entries_ = other.entries_;
        by_tag_ = other.by_tag_;
        next_key_ = other.next_key_;
    }
    return *this;
}

DecompositionTable &DecompositionTable::global() {
    static DecompositionTable table;
    return table;
}

uint32_t DecompositionTable::intern_angle(double theta, double epsilon) {
    if (!(epsilon > 0)) {
        throw ConfigError("epsilon must be positive");
    }
    if (auto m = exact_multiple(theta)) {
        return *m;
    }
    std::string tag = angle_tag(theta, epsilon);
    std::unique_lock lock(mu_);
    auto it = by_tag_.find(tag);
    if (it != by_tag_.end()) {
        return it->second;
    }
    DecompositionEntry e;
    e.key = next_key_;
    e.angle_tag = tag;
    e.theta = theta;
    e.epsilon = epsilon;
    put_locked(e);
    return e.key;
}

void DecompositionTable::put_locked(const DecompositionEntry &entry) {
    auto it = entries_.find(entry.key);
    if (it != entries_.end()) {
        DecompositionEntry &cur = it->second;
        if (cur.angle_tag != entry.angle_tag) {
            throw IntegrityError(
                "decomposition key " + std::to_string(entry.key) + " already bound to " + cur.angle_tag);
        }
        if (!entry.pending()) {
            if (!cur.pending() && cur.sequence != entry.sequence) {
                throw IntegrityError(
                    "decomposition key " + std::to_string(entry.key) + " has a conflicting sequence");
            }
            cur.sequence = entry.sequence;
        }
        return;
    }
    auto t = by_tag_.find(entry.angle_tag);
    if (t != by_tag_.end()) {
        throw IntegrityError("angle " + entry.angle_tag + " already has key " + std::to_string(t->second));
    }
    entries_[entry.key] = entry;
    by_tag_[entry.angle_tag] = entry.key;
    next_key_ = std::max(next_key_, entry.key + 1);
}

void DecompositionTable::put(const DecompositionEntry &entry) {
    std::unique_lock lock(mu_);
    put_locked(entry);
}

void DecompositionTable::set_sequence(uint32_t key, std::vector<SeqLetter> sequence) {
    std::unique_lock lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        throw ConfigError("unknown decomposition key " + std::to_string(key));
    }
    DecompositionEntry e = it->second;
    e.sequence = std::move(sequence);
    put_locked(e);
}

size_t DecompositionTable::load_table_text(std::string_view text) {
    std::vector<DecompositionEntry> parsed;
    std::istringstream in{std::string(text)};
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream ls(line);
        std::string key_s, theta_s, eps_s, seq_s, extra;
        if (!(ls >> key_s)) {
            continue;
        }
        if (!(ls >> theta_s >> eps_s >> seq_s) || (ls >> extra)) {
            throw ParseError("table line needs '<key> <theta> <epsilon> <sequence>'", line_no, 1);
        }
        DecompositionEntry e;
        try {
            size_t used = 0;
            unsigned long k = std::stoul(key_s, &used);
            if (used != key_s.size() || k > 0xFFFFFFFFul) {
                throw std::invalid_argument("key");
            }
            e.key = (uint32_t)k;
            e.theta = std::stod(theta_s, &used);
            if (used != theta_s.size()) {
                throw std::invalid_argument("theta");
            }
            e.epsilon = std::stod(eps_s, &used);
            if (used != eps_s.size() || !(e.epsilon > 0)) {
                throw std::invalid_argument("epsilon");
            }
            e.sequence = sequence_from_string(seq_s);
        } catch (const std::invalid_argument &) {
            throw ParseError("malformed table line", line_no, 1);
        } catch (const std::out_of_range &) {
            throw ParseError("number out of range in table line", line_no, 1);
        } catch (const ConfigError &ex) {
            throw ParseError(ex.what(), line_no, 1);
        }
        if (e.sequence.empty()) {
            throw ParseError("empty sequence", line_no, 1);
        }
        if (e.key < NUM_BUILTIN) {
            throw ParseError("keys below 8 are reserved for built-in angles", line_no, 1);
        }
        e.angle_tag = angle_tag(e.theta, e.epsilon);
        parsed.push_back(std::move(e));
    }
    std::unique_lock lock(mu_);
    for (const auto &e : parsed) {
        put_locked(e);
    }
    return parsed.size();
}

size_t DecompositionTable::load_table(const std::filesystem::path &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("cannot open decomposition table " + path.string());
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return load_table_text(ss.str());
}

std::string DecompositionTable::table_text() const {
    std::shared_lock lock(mu_);
    std::string out;
    char buf[160];
    for (const auto &[key, e] : entries_) {
        if (key < NUM_BUILTIN || e.pending()) {
            continue;
        }
        std::snprintf(buf, sizeof(buf), "%u %.17g %.17g ", key, e.theta, e.epsilon);
        out += buf;
        out += sequence_to_string(e.sequence);
        out += "\n";
    }
    return out;
}

void DecompositionTable::save_table(const std::filesystem::path &path) const {
    std::string text = table_text();
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw ConfigError("cannot write " + tmp.string());
        }
        f << text;
    }
    std::filesystem::rename(tmp, path);
}

std::optional<DecompositionEntry> DecompositionTable::find(uint32_t key) const {
    std::shared_lock lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second;
}

DecompositionEntry DecompositionTable::lookup_sequence(uint32_t key) const {
    auto e = find(key);
    if (!e) {
        throw ConfigError("unknown decomposition key " + std::to_string(key));
    }
    if (e->pending()) {
        throw ConfigError("decomposition key " + std::to_string(key) + " (" + e->angle_tag + ") is pending a table load");
    }
    return *e;
}

double DecompositionTable::theta(uint32_t key) const {
    auto e = find(key);
    if (!e) {
        throw ConfigError("unknown decomposition key " + std::to_string(key));
    }
    return e->theta;
}

bool DecompositionTable::contains(uint32_t key) const {
    std::shared_lock lock(mu_);
    return entries_.count(key) != 0;
}

bool DecompositionTable::is_pending(uint32_t key) const {
    auto e = find(key);
    return e && e->pending();
}

bool DecompositionTable::is_clifford_key(uint32_t key) const {
    return key < NUM_BUILTIN && key % 2 == 0;
}

uint32_t DecompositionTable::t_weight(uint32_t key) const {
    if (is_clifford_key(key)) {
        return 0;
    }
    auto e = find(key);
    if (!e) {
        throw ConfigError("unknown decomposition key " + std::to_string(key));
    }
    uint32_t n = 0;
    for (auto l : e->sequence) {
        n += l == SeqLetter::T || l == SeqLetter::Tdg;
    }
    // A teleported rotation costs at least one T-type measurement, pending or not.
    return n == 0 ? 1 : n;
}

size_t DecompositionTable::size() const {
    std::shared_lock lock(mu_);
    return entries_.size();
}

std::vector<DecompositionEntry> DecompositionTable::entries() const {
    std::shared_lock lock(mu_);
    std::vector<DecompositionEntry> out;
    for (const auto &[k, e] : entries_) {
        out.push_back(e);
    }
    return out;
}

}  // namespace qstream
