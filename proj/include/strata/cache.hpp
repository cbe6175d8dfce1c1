/*
 * Copyright 2026 The strata authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "strata/checksum.hpp"
#include "strata/error.hpp"
#include "strata/ring.hpp"
#include "strata/serialize.hpp"

namespace strata {

/// Cache key: the type name (with any qualifier, e.g. "A3/lifted"), the
/// ambient dimension and the basis tag ("F" or "Q<k>").
struct CacheKey {
    std::string type;
    int n = 0;
    std::string basis;

    auto operator<=>(const CacheKey &) const = default;

    static std::string basis_of(const RingSpec &spec) {
        return spec.basis == Basis::F ? "F" : "Q" + std::to_string(spec.k);
    }
};

struct CacheWarning {
    int line = 0;
    ErrorKind kind = ErrorKind::CorruptCache;
    std::string message;
};

/// Append-only JSON-lines store of classes. Each line carries the SHA-256
/// of its canonical key+class payload; lines that fail the checksum or do
/// not match their key are skipped with a warning, never used.
class ClassCache {
  public:
    explicit ClassCache(std::filesystem::path path) : path_(std::move(path)) {}

    /// $STRATA_CACHE, else $XDG_CACHE_HOME/strata/classes.jsonl, else
    /// ~/.cache/strata/classes.jsonl.
    static std::filesystem::path default_path() {
        if (const char *p = std::getenv("STRATA_CACHE"); p && *p)
            return p;
        if (const char *x = std::getenv("XDG_CACHE_HOME"); x && *x)
            return std::filesystem::path(x) / "strata" / "classes.jsonl";
        if (const char *h = std::getenv("HOME"); h && *h)
            return std::filesystem::path(h) / ".cache" / "strata" / "classes.jsonl";
        return "strata-classes.jsonl";
    }

    const std::filesystem::path &path() const { return path_; }

    static std::string payload(const CacheKey &key, const ClassPoly &cls) {
        nlohmann::ordered_json p;
        p["key"] = {{"type", key.type}, {"n", key.n}, {"basis", key.basis}};
        p["class"] = to_json(cls);
        return p.dump();
    }

    /// Reads every entry; later lines override earlier ones with the same key.
    void load() {
        entries_.clear();
        warnings_.clear();
        std::ifstream in(path_);
        if (!in)
            return;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty())
                continue;
            try {
                auto j = nlohmann::json::parse(line);
                const auto &k = j.at("key");
                CacheKey key{k.at("type").get<std::string>(), k.at("n").get<int>(), k.at("basis").get<std::string>()};
                ClassPoly cls = from_json(j.at("class"));
                if (sha256_hex(payload(key, cls)) != j.at("sha256").get<std::string>())
                    throw Error(ErrorKind::CorruptCache, "checksum mismatch");
                if (cls.spec().n != key.n || CacheKey::basis_of(cls.spec()) != key.basis)
                    throw Error(ErrorKind::CorruptCache, "ring spec does not match the key");
                entries_.insert_or_assign(key, cls);
            } catch (const Error &e) {
                warnings_.push_back({lineno, ErrorKind::CorruptCache, e.what()});
            } catch (const std::exception &e) {
                warnings_.push_back({lineno, ErrorKind::CorruptCache, e.what()});
            }
        }
    }

    std::optional<ClassPoly> get(const CacheKey &key) const {
        auto it = entries_.find(key);
        if (it == entries_.end())
            return std::nullopt;
        return it->second;
    }

    /// Appends one entry to the file and to the in-memory view.
    void put(const CacheKey &key, const ClassPoly &cls) {
        if (cls.spec().n != key.n || CacheKey::basis_of(cls.spec()) != key.basis)
            throw Error(ErrorKind::SpecMismatch, "class ring does not match the cache key");
        if (path_.has_parent_path())
            std::filesystem::create_directories(path_.parent_path());
        std::ofstream out(path_, std::ios::app);
        if (!out)
            throw Error(ErrorKind::InvalidArgument, "cannot write cache " + path_.string());
        std::string p = payload(key, cls);
        nlohmann::ordered_json line = nlohmann::ordered_json::parse(p);
        line["sha256"] = sha256_hex(p);
        out << line.dump() << '\n';
        entries_.insert_or_assign(key, cls);
    }

    void clear() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
        entries_.clear();
        warnings_.clear();
    }

    const std::map<CacheKey, ClassPoly> &entries() const { return entries_; }
    const std::vector<CacheWarning> &warnings() const { return warnings_; }

  private:
    std::filesystem::path path_;
    std::map<CacheKey, ClassPoly> entries_;
    std::vector<CacheWarning> warnings_;
};

} // namespace strata
