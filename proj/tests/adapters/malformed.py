#!/usr/bin/env python3
# Copyright 2026 The summpipe authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Protocol violator: answers requests with a line that is not JSON."""

import json
import sys


def main():
    print(json.dumps({"ready": True}), flush=True)
    for _ in sys.stdin:
        print("this is not a json object", flush=True)


if __name__ == "__main__":
    main()
