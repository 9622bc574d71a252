import { PlannerApi } from "./api.js";
import { PlannerApp } from "./app.js";

const app = new PlannerApp(new PlannerApi(""), document.body);
void app.start();
