#!/usr/bin/env node
import { run } from "./main.js";

process.exit(run(process.argv.slice(2)));
