#pragma once

#include <stdexcept>
#include <string>

namespace cts {

// The clinic day as two aligned grids: ats slots are the 5-minute units
// the durations are expressed in, ts slots are the admissible therapy
// start positions. ts index t sits on ats slot 2t, so ts 1 is the second
// 5-minute slot of the day (07:35-07:40 with the default opening time).
struct TimeGrid {
    int ats_count = 72;
    int ts_count = 36;
    // Wall-clock minutes at which ats slot 1 begins (07:30).
    int slot_zero_minutes = 7 * 60 + 30;

    bool operator==(const TimeGrid&) const = default;

    int ats_of(int ts) const {
        if (ts < 1 || ts > ts_count)
            throw std::out_of_range("ts index " + std::to_string(ts) +
                                    " outside [1.." + std::to_string(ts_count) + "]");
        return 2 * ts;
    }

    // "HH:MM" label of the start of an ats slot.
    std::string clock_of_ats(int ats) const {
        int minutes = slot_zero_minutes + (ats - 1) * 5;
        int h = minutes / 60;
        int m = minutes % 60;
        char buf[6];
        buf[0] = static_cast<char>('0' + h / 10);
        buf[1] = static_cast<char>('0' + h % 10);
        buf[2] = ':';
        buf[3] = static_cast<char>('0' + m / 10);
        buf[4] = static_cast<char>('0' + m % 10);
        buf[5] = '\0';
        return buf;
    }
};

}  // namespace cts
