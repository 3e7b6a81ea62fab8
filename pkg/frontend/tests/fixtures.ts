import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

export function fixture<T = any>(name: string): T {
  const path = join(here, "..", "fixtures", name);
  return JSON.parse(readFileSync(path, "utf-8")) as T;
}
