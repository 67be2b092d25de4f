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

#ifndef QSTREAM_DECOMP_TABLE_H
#define QSTREAM_DECOMP_TABLE_H

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qstream {

/// Letters of a decomposition sequence. The numeric values are the 4-bit
/// codes used by TABLE_PUT frames.
enum class SeqLetter : uint8_t {
    T = 1,
    Tdg = 2,
    S = 3,
    Sdg = 4,
    H = 5,
    X = 6,
    Z = 7,
};

/// Text form: T t S s H X Z (lower case marks the adjoint).
char seq_letter_char(SeqLetter l);
std::optional<SeqLetter> seq_letter_from_char(char c);
std::string sequence_to_string(const std::vector<SeqLetter> &seq);
std::vector<SeqLetter> sequence_from_string(std::string_view text);

struct DecompositionEntry {
    uint32_t key = 0;
    std::string angle_tag;
    double theta = 0;
    double epsilon = 0;
    /// Empty while the key is pending a table load.
    std::vector<SeqLetter> sequence;

    bool pending() const {
        return sequence.empty();
    }
    bool operator==(const DecompositionEntry &other) const = default;
};

/// 17 significant digits for theta, then '@' and the precision.
std::string angle_tag(double theta, double epsilon);

/// Tagged table of Rz decomposition sequences. Keys 0..7 are built in and
/// stand for m*pi/4. Thread-safe.
class DecompositionTable {
   public:
    static constexpr uint32_t NUM_BUILTIN = 8;
    static constexpr double EXACT_TOLERANCE = 1e-12;
    static constexpr double DEFAULT_EPSILON = 1e-10;

    DecompositionTable();
    DecompositionTable(const DecompositionTable &other);
    DecompositionTable &operator=(const DecompositionTable &other);

    /// Process-wide table used when no other table is supplied.
    static DecompositionTable &global();

    uint32_t intern_angle(double theta, double epsilon = DEFAULT_EPSILON);

    size_t load_table(const std::filesystem::path &path);
    size_t load_table_text(std::string_view text);
    /// Writes every non-builtin entry that has a sequence.
    void save_table(const std::filesystem::path &path) const;
    std::string table_text() const;

    /// Registers or completes an entry (table loads and TABLE_PUT frames).
    void put(const DecompositionEntry &entry);
    /// Sets the sequence of an already interned key.
    void set_sequence(uint32_t key, std::vector<SeqLetter> sequence);

    /// Throws for unknown or pending keys.
    DecompositionEntry lookup_sequence(uint32_t key) const;
    std::optional<DecompositionEntry> find(uint32_t key) const;

    /// Angle of any interned key (pending keys included).
    double theta(uint32_t key) const;
    bool contains(uint32_t key) const;
    bool is_pending(uint32_t key) const;
    /// Built-in even multiples of pi/4. These compile without teleportation.
    bool is_clifford_key(uint32_t key) const;
    uint32_t t_weight(uint32_t key) const;
    size_t size() const;
    std::vector<DecompositionEntry> entries() const;

   private:
    void put_locked(const DecompositionEntry &entry);

    mutable std::shared_mutex mu_;
    std::map<uint32_t, DecompositionEntry> entries_;
    std::unordered_map<std::string, uint32_t> by_tag_;
    uint32_t next_key_ = NUM_BUILTIN;
};

}  // namespace qstream

#endif
